#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dsent/partition.hpp"
#include "oracles.hpp"

using namespace dsent;

namespace {

CellKey key(std::size_t width, std::initializer_list<std::size_t> members) {
  CellKey k(width);
  for (auto i : members) k.set(i);
  return k;
}

}  // namespace

TEST(CellKey, SetTestSliceAppend) {
  CellKey k(70);
  k.set(0);
  k.set(65);
  EXPECT_TRUE(k.test(65));
  EXPECT_FALSE(k.test(64));
  EXPECT_EQ(k.count(), 2u);
  EXPECT_EQ(k.members(), (std::vector<std::size_t>{0, 65}));
  EXPECT_EQ(k.slice(60, 10), key(10, {5}));
  EXPECT_EQ(key(2, {1}).append(key(3, {0, 2})), key(5, {1, 2, 4}));
  EXPECT_EQ(key(3, {0, 2}).to_string(), "101");
}

TEST(CellMeasures, IndicatorOnTwoPoints) {
  const Collection f(FiniteSpace::uniform(2), {Eigen::Vector2d(1, 0)});
  const CellPartition p = cell_measures(f);
  ASSERT_EQ(p.cells.size(), 2u);
  EXPECT_EQ(p.cells.at(key(1, {0})), 0.5);
  EXPECT_EQ(p.cells.at(key(1, {})), 0.5);
  EXPECT_NEAR(static_entropy(f), std::log(2.0), 1e-15);
}

TEST(CellMeasures, ConstantOneIsASingleCell) {
  const Collection f(FiniteSpace::uniform(3), {Eigen::Vector3d::Ones()});
  const CellPartition p = cell_measures(f);
  ASSERT_EQ(p.cells.size(), 1u);
  EXPECT_EQ(p.cells.begin()->second, 1.0);
  EXPECT_EQ(static_entropy(f), 0.0);
}

TEST(CellMeasures, DuplicateAddsNoRefinement) {
  const FiniteSpace s = FiniteSpace::make(Eigen::Vector3d(0.25, 0.25, 0.5));
  const Eigen::Vector3d f(0.3, 0.9, 0.6);
  const CellPartition single = cell_measures(Collection(s, {f}));
  const CellPartition twice = cell_measures(Collection(s, {f, f}));
  ASSERT_EQ(twice.cells.size(), single.cells.size());
  EXPECT_EQ(twice.cells.at(key(2, {0, 1})), single.cells.at(key(1, {0})));
  EXPECT_EQ(twice.cells.at(key(2, {})), single.cells.at(key(1, {})));
}

TEST(CellMeasures, ConstantHalfGivesLogTwo) {
  const FiniteSpace s = FiniteSpace::make(Eigen::Vector3d(0.125, 0.375, 0.5));
  EXPECT_NEAR(static_entropy(Collection(s, {Eigen::Vector3d::Constant(0.5)})), std::log(2.0), 1e-15);
}

TEST(CellMeasures, PointIntervalsDropTiesAndEmptyEnds) {
  const auto intervals = point_intervals({0.5, 0.5, 1.0, 0.0});
  // (0.5,1] satisfies only f_3, (0,0.5] satisfies f_1, f_2, f_3.
  ASSERT_EQ(intervals.size(), 2u);
  EXPECT_EQ(intervals[0].key, key(4, {2}));
  EXPECT_EQ(intervals[0].lo, 0.5);
  EXPECT_EQ(intervals[0].hi, 1.0);
  EXPECT_EQ(intervals[1].key, key(4, {0, 1, 2}));
}

TEST(CellMeasures, AgreesWithSlicingOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const FiniteSpace s = oracle::random_space(1 + rng() % 7, rng);
    const Collection f = oracle::random_collection(s, 1 + rng() % 6, rng);
    const CellPartition p = cell_measures(f);
    EXPECT_NEAR(p.total_mass(), 1.0, 1e-12);
    EXPECT_LE(p.cells.size(), s.size() * (f.size() + 1));
    EXPECT_NEAR(static_entropy(f), oracle::static_entropy(f), 1e-12);
  }
}

TEST(CellMeasures, IndicatorGivesBinaryEntropy) {
  // A {0,1}-valued f splits X x [0,1] into {f = 1} x [0,1] and its complement.
  const FiniteSpace s = FiniteSpace::make(Eigen::Vector4d(0.1, 0.2, 0.3, 0.4));
  const Eigen::Vector4d f(1, 0, 1, 0);
  const double m = 0.4;
  EXPECT_NEAR(static_entropy(Collection(s, {f})), -m * std::log(m) - (1 - m) * std::log(1 - m), 1e-15);
}

TEST(ConditionalEntropy, SpecExamples) {
  const FiniteSpace s = FiniteSpace::uniform(2);
  const Collection f(s, {Eigen::Vector2d(1, 0)});
  const Collection g(s, {Eigen::Vector2d(0, 1)});
  EXPECT_EQ(conditional_entropy(f, f), 0.0);
  EXPECT_EQ(conditional_entropy(f, g), 0.0);
  const Collection zero(s, {Eigen::Vector2d::Zero()});
  EXPECT_NEAR(conditional_entropy(f, zero), static_entropy(f), 1e-15);
}

TEST(ConditionalEntropy, ShrinksWithPerturbationSize) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const FiniteSpace s = oracle::random_space(2 + rng() % 5, rng);
    const Collection f = oracle::random_collection(s, 1 + rng() % 3, rng);
    const Collection h = oracle::random_collection(s, f.size(), rng);
    double previous = INFINITY;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      std::vector<Eigen::VectorXd> gs;
      for (std::size_t i = 0; i < f.size(); ++i) gs.push_back((1 - delta) * f[i] + delta * h[i]);
      const Collection g(s, gs);
      EXPECT_LE(collection_distance(f, g), delta);
      const double sym = conditional_entropy(f, g) + conditional_entropy(g, f);
      EXPECT_LE(sym, previous + 1e-12);
      previous = sym;
    }
  }
}

TEST(Join, MatchesConcatenationExactly) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const FiniteSpace s = oracle::random_space(1 + rng() % 6, rng);
    const Collection f = oracle::random_collection(s, 1 + rng() % 4, rng);
    const Collection g = oracle::random_collection(s, 1 + rng() % 4, rng);
    EXPECT_EQ(join_partitions(f, g).cells, cell_measures(f.concat(g)).cells);
  }
}

TEST(Join, MarginalsRecoverFactors) {
  std::mt19937_64 rng(29);
  const FiniteSpace s = oracle::random_space(5, rng);
  const Collection f = oracle::random_collection(s, 3, rng);
  const Collection g = oracle::random_collection(s, 2, rng);
  const CellPartition joint = cell_measures(f.concat(g));
  const CellPartition left = marginalize(joint, 0, 3);
  for (const auto& [k, m] : cell_measures(f).cells) EXPECT_NEAR(left.cells.at(k), m, 1e-15);
  const CellPartition right = marginalize(joint, 3, 2);
  for (const auto& [k, m] : cell_measures(g).cells) EXPECT_NEAR(right.cells.at(k), m, 1e-15);
}

TEST(Cells, CsvDump) {
  std::ostringstream out;
  write_cells_csv(out, cell_measures(Collection(FiniteSpace::uniform(2), {Eigen::Vector2d(1, 0)})));
  EXPECT_EQ(out.str().substr(0, 16), "cell_key,measure");
}
