#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "dsent/entropy.hpp"
#include "dsent/partition.hpp"
#include "dsent/sampling.hpp"
#include "dsent/spectral.hpp"

using namespace dsent;

namespace {

Collection random_collection(std::size_t points, std::size_t r, std::mt19937_64& rng) {
  std::vector<Eigen::VectorXd> fs;
  for (std::size_t i = 0; i < r; ++i) {
    Eigen::VectorXd f(static_cast<Eigen::Index>(points));
    for (Eigen::Index x = 0; x < f.size(); ++x) f[x] = unit_uniform(rng);
    fs.push_back(f);
  }
  return Collection(FiniteSpace::uniform(points), fs);
}

void BM_CellMeasures(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Collection f = random_collection(static_cast<std::size_t>(state.range(0)),
                                         static_cast<std::size_t>(state.range(1)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(cell_measures(f));
}
BENCHMARK(BM_CellMeasures)->Args({64, 4})->Args({64, 16})->Args({256, 16});

void BM_EntropyTrace(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const DenseOperator t = sinkhorn_sample(8, rng);
  const Collection f = random_collection(8, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(entropy_trace(t, f, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_EntropyTrace)->Arg(8)->Arg(24)->Arg(64);

void BM_ShiftEntropyTrace(benchmark::State& state) {
  const std::vector<WindowFunction> f{WindowFunction::coordinate_indicator(2, 1, 1)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_trace(ShiftOperator::koopman(2), f, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_ShiftEntropyTrace)->Arg(8)->Arg(12);

void BM_Jdlg(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const DenseOperator t = sinkhorn_sample(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(jdlg_decompose(t));
}
BENCHMARK(BM_Jdlg)->Arg(8)->Arg(32)->Arg(64);

void BM_Nf(benchmark::State& state) {
  const DenseOperator t = annulus_operator(static_cast<std::size_t>(state.range(0)), 4, 3, AnnulusVariant::Plain);
  for (auto _ : state) benchmark::DoNotOptimize(nf_decompose(t));
}
BENCHMARK(BM_Nf)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
