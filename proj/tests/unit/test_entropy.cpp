#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dsent/entropy.hpp"
#include "dsent/partition.hpp"
#include "oracles.hpp"

using namespace dsent;
using oracle::error_code;

namespace {

const double kLog2 = std::log(2.0);

Collection indicator_of_first(std::size_t n) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  f[0] = 1.0;
  return Collection(FiniteSpace::uniform(n), {f});
}

// F v TF v ... v T^{n-1}F built by hand from the operator and the partition
// module only.
double join_entropy(const DenseOperator& t, const Collection& f, const std::vector<std::uint64_t>& times) {
  std::vector<Eigen::VectorXd> fs;
  for (auto k : times) {
    for (const auto& g : f.functions()) fs.push_back(t.apply_power(g, k).cwiseMax(0.0).cwiseMin(1.0));
  }
  return static_entropy(Collection(t.space(), fs));
}

}  // namespace

TEST(Sequence, Generators) {
  EXPECT_EQ(SequenceSpec::powers_of_two().terms(5), (std::vector<std::uint64_t>{1, 2, 4, 8, 16}));
  EXPECT_EQ(SequenceSpec::arithmetic(3).terms(4), (std::vector<std::uint64_t>{3, 6, 9, 12}));
  EXPECT_EQ(SequenceSpec::primes().terms(6), (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13}));
  EXPECT_EQ(SequenceSpec::parse("1, 3,7").terms(3), (std::vector<std::uint64_t>{1, 3, 7}));
  EXPECT_EQ(SequenceSpec::parse("arithmetic:5").terms(2), (std::vector<std::uint64_t>{5, 10}));
  EXPECT_EQ(SequenceSpec::parse("primes").name(), SequenceSpec::primes().name());
}

TEST(Sequence, Errors) {
  EXPECT_EQ(error_code([] { SequenceSpec::parse("3,2"); }), ErrorCode::BadSequence);
  EXPECT_EQ(error_code([] { SequenceSpec::parse("0,2"); }), ErrorCode::BadSequence);
  EXPECT_EQ(error_code([] { SequenceSpec::parse("fibonacci"); }), ErrorCode::BadSequence);
  EXPECT_EQ(error_code([] { SequenceSpec::parse("arithmetic:0"); }), ErrorCode::BadSequence);
  EXPECT_EQ(error_code([] { SequenceSpec::parse("1,2").terms(3); }), ErrorCode::BadSequence);
  EXPECT_EQ(error_code([] { SequenceSpec::powers_of_two().terms(64); }), ErrorCode::BadSequence);
}

TEST(EntropyTrace, IdentityIsConstant) {
  const DenseOperator t = cyclic_permutation(2, 0);
  const Collection f(FiniteSpace::uniform(2), {Eigen::Vector2d(1, 0)});
  const EntropyTrace tr = entropy_trace(t, f, 40);
  for (const auto& row : tr.rows) EXPECT_NEAR(row.h, kLog2, 1e-15);
  const EntropyEstimate e = estimate_from_trace(tr, 1e-2);
  EXPECT_LE(e.estimate, kLog2 / 40 + 1e-15);
  EXPECT_TRUE(e.converged);
}

TEST(EntropyTrace, MeanProjectionSaturates) {
  const DenseOperator t = mean_projection(FiniteSpace::uniform(2));
  const Collection f(FiniteSpace::uniform(2), {Eigen::Vector2d(1, 0)});
  const EntropyTrace tr = entropy_trace(t, f, 32);
  EXPECT_NEAR(tr.rows[0].h, kLog2, 1e-15);
  // F joined with the constant 1/2 function: four cells of mass 1/4.
  for (std::size_t n = 1; n < tr.rows.size(); ++n) EXPECT_NEAR(tr.rows[n].h, 2 * kLog2, 1e-15);
  EXPECT_LT(tr.final_slope(), 0.05);
}

TEST(EntropyTrace, MatchesHandBuiltJoins) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseOperator t = sinkhorn_sample(2 + rng() % 5, rng);
    const Collection f = oracle::random_collection(t.space(), 1 + rng() % 2, rng);
    const EntropyTrace tr = entropy_trace(t, f, 6);
    std::vector<std::uint64_t> times;
    for (std::size_t n = 1; n <= 6; ++n) {
      times.push_back(n - 1);
      EXPECT_NEAR(tr.rows[n - 1].h, join_entropy(t, f, times), 1e-12);
      if (n > 1) EXPECT_GE(tr.rows[n - 1].h, tr.rows[n - 2].h);
    }
  }
}

TEST(EntropyTrace, SubadditiveInTime) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseOperator t = sinkhorn_sample(3 + rng() % 4, rng);
    const Collection f = oracle::random_collection(t.space(), 1, rng);
    const EntropyTrace tr = entropy_trace(t, f, 8);
    for (std::uint64_t m = 1; m < 8; ++m) {
      for (std::uint64_t n = 1; m + n <= 8; ++n) {
        std::vector<std::uint64_t> block;
        for (std::uint64_t k = m; k < m + n; ++k) block.push_back(k);
        EXPECT_LE(tr.rows[m + n - 1].h, tr.rows[m - 1].h + join_entropy(t, f, block) + 1e-12);
      }
    }
  }
}

TEST(EntropyTrace, KoopmanShiftGrowsLinearly) {
  const std::vector<WindowFunction> f{WindowFunction::coordinate_indicator(2, 1, 1)};
  const EntropyTrace tr = entropy_trace(ShiftOperator::koopman(2), f, 12);
  for (const auto& row : tr.rows) EXPECT_NEAR(row.h, double(row.n) * kLog2, 1e-12);
  const EntropyEstimate e = dynamic_entropy_estimate(ShiftOperator::koopman(2), f, 10, 1e-9);
  EXPECT_NEAR(e.estimate, kLog2, 1e-12);
  EXPECT_TRUE(e.converged);
}

TEST(EntropyTrace, PerturbedCycleSaturates) {
  const DenseOperator t =
      convex_combination(0.5, cyclic_permutation(3), mean_projection(FiniteSpace::uniform(3)));
  // n functions cut each of the 3 fibers into at most n + 1 slices.
  const EntropyTrace tr = entropy_trace(t, indicator_of_first(3), 16);
  for (const auto& row : tr.rows) EXPECT_LE(row.h, std::log(3.0 * double(row.n + 1)) + 1e-12);
  EXPECT_LT(tr.rows[15].h_over_n, tr.rows[3].h_over_n);
}

TEST(EntropyTrace, Errors) {
  const DenseOperator t = cyclic_permutation(3);
  EXPECT_EQ(error_code([&] { entropy_trace(t, indicator_of_first(3), 0); }), ErrorCode::BadParameters);
  EXPECT_EQ(error_code([&] { entropy_trace(t, indicator_of_first(4), 3); }), ErrorCode::SpaceMismatch);
  EXPECT_EQ(error_code([&] { dynamic_entropy_estimate(t, indicator_of_first(3), 3, 0.1); }),
            ErrorCode::BadParameters);
}

TEST(EntropyTrace, CellBudgetKeepsPartialTrace) {
  const std::vector<WindowFunction> f{WindowFunction::coordinate_indicator(2, 1, 1)};
  try {
    entropy_trace(ShiftOperator::koopman(2), f, 12, TraceOptions{100});
    FAIL() << "budget not enforced";
  } catch (const CellBudgetError& e) {
    EXPECT_EQ(e.code(), ErrorCode::CellBudgetExceeded);
    // 2^6 = 64 cells fit, 2^7 do not.
    EXPECT_EQ(e.partial_trace().rows.size(), 6u);
  }
}

TEST(SequenceEntropy, CycleOfFourAlongPowersOfTwo) {
  const EntropyTrace tr =
      sequence_entropy_trace(cyclic_permutation(4), indicator_of_first(4), SequenceSpec::powers_of_two(), 8);
  for (const auto& row : tr.rows) EXPECT_LE(row.h, std::log(4.0 * double(row.n + 1)) + 1e-12);
  EXPECT_LT(tr.rows.back().h_over_n, 0.6);
}

TEST(SequenceEntropy, KoopmanAlongPowersOfTwo) {
  const std::vector<WindowFunction> f{WindowFunction::coordinate_indicator(2, 1, 1)};
  const EntropyTrace tr = sequence_entropy_trace(ShiftOperator::koopman(2), f, SequenceSpec::powers_of_two(), 4);
  for (const auto& row : tr.rows) EXPECT_NEAR(row.h, double(row.n) * kLog2, 1e-12);
}

TEST(SequenceEntropy, MatchesHandBuiltJoins) {
  std::mt19937_64 rng(41);
  const DenseOperator t = sinkhorn_sample(5, rng);
  const Collection f = oracle::random_collection(t.space(), 1, rng);
  const SequenceSpec seq = SequenceSpec::parse("2,3,7,100");
  const EntropyTrace tr = sequence_entropy_trace(t, f, seq, 4);
  EXPECT_NEAR(tr.rows[3].h, join_entropy(t, f, seq.terms(4)), 1e-12);
}

TEST(SequenceEntropy, MeanProjectionFlattens) {
  const DenseOperator t = mean_projection(FiniteSpace::uniform(4));
  const EntropyTrace tr = sequence_entropy_trace(t, indicator_of_first(4), SequenceSpec::primes(), 40);
  EXPECT_LT(tr.limsup_surrogate(), 0.05);
}

TEST(Trace, BaseConversion) {
  const std::vector<WindowFunction> f{WindowFunction::coordinate_indicator(2, 1, 1)};
  const EntropyTrace bits = entropy_trace(ShiftOperator::koopman(2), f, 5).in_base(2.0);
  for (const auto& row : bits.rows) EXPECT_NEAR(row.h, double(row.n), 1e-12);
}

TEST(Search, BoundsAndDeterminism) {
  SearchOptions options;
  options.budget = 6;
  options.horizon = 32;
  options.seed = 99;
  const SupremumSearch mean = entropy_supremum_search(mean_projection(FiniteSpace::uniform(5)), options);
  EXPECT_LE(mean.lower_bound, std::log(5.0 * 33.0) / 32.0);
  EXPECT_EQ(mean.candidate_values.size(), 6u);

  options.horizon = 10;
  const SupremumSearch shift = entropy_supremum_search(ShiftOperator::koopman(2), options);
  EXPECT_NEAR(shift.lower_bound, kLog2, 1e-12);

  std::mt19937_64 rng(3);
  const DenseOperator t = sinkhorn_sample(6, rng);
  options.horizon = 12;
  const SupremumSearch a = entropy_supremum_search(t, options);
  const SupremumSearch b = entropy_supremum_search(t, options);
  EXPECT_EQ(a.candidate_values, b.candidate_values);
  EXPECT_EQ(a.candidate_labels, b.candidate_labels);
}

TEST(Search, SingletonAndMultiCollectionsAgreeOnZero) {
  // A permutation has zero sequence entropy for singletons and pairs alike.
  const DenseOperator t = cyclic_permutation(6);
  SearchOptions options;
  options.budget = 8;
  options.horizon = 40;
  options.sequence = SequenceSpec::powers_of_two();
  EXPECT_LT(entropy_supremum_search(t, options).lower_bound, 0.2);
  std::mt19937_64 rng(5);
  const Collection pair = oracle::random_collection(t.space(), 2, rng);
  EXPECT_LT(sequence_entropy_trace(t, pair, SequenceSpec::powers_of_two(), 40).limsup_surrogate(), 0.2);
}
