#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "dsent/shift.hpp"
#include "oracles.hpp"

using namespace dsent;
using oracle::error_code;

TEST(Window, Validation) {
  EXPECT_EQ(error_code([] { WindowFunction(2, 0, 1, {0, 1}); }), ErrorCode::BadParameters);
  EXPECT_EQ(error_code([] { WindowFunction(2, 1, 2, {0, 1, 1}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(error_code([] { WindowFunction::coordinate_indicator(2, 1, 2); }), ErrorCode::BadParameters);
}

TEST(Window, ProductLayoutAndMoments) {
  const WindowFunction f = WindowFunction::product(3, 2, {{0, 1, 2}, {1, 10, 100}});
  // Index digit j is the value of coordinate 2 + j.
  EXPECT_EQ(f.values()[1 + 3 * 2], 1.0 * 100);
  EXPECT_NEAR(f.mean(), 1.0 * 37.0, 1e-12);
  const WindowFunction g = WindowFunction::coordinate(2, 1, {0, 1});
  EXPECT_DOUBLE_EQ(g.l2_norm(), std::sqrt(0.5));
}

TEST(Materialize, UsesTheUnionOfCoordinates) {
  const std::vector<WindowFunction> fs{WindowFunction::coordinate(2, 1, {0, 1}),
                                       WindowFunction::coordinate(2, 5, {0, 2})};
  const auto m = materialize(fs);
  EXPECT_EQ(m.coordinates, (std::vector<std::size_t>{1, 5}));
  ASSERT_EQ(m.space.size(), 4u);
  // Point p has digit p % 2 for coordinate 1 and p / 2 for coordinate 5.
  for (std::size_t p = 0; p < 4; ++p) {
    EXPECT_EQ(m.functions[0][Eigen::Index(p)], double(p % 2));
    EXPECT_EQ(m.functions[1][Eigen::Index(p)], 2.0 * double(p / 2));
  }
  const std::vector<WindowFunction> wide{WindowFunction(2, 1, 20, std::vector<double>(1u << 20, 0.0)),
                                         WindowFunction::coordinate(2, 30, {0, 1})};
  EXPECT_EQ(error_code([&] { materialize(wide, 1u << 20); }), ErrorCode::CellBudgetExceeded);
}

TEST(Koopman, TranslatesCoordinates) {
  const ShiftOperator t = ShiftOperator::koopman(2);
  const WindowFunction f = WindowFunction::coordinate_indicator(2, 1, 1);
  const WindowFunction g = t.apply_power(f, 6);
  EXPECT_EQ(g.first(), 7u);
  EXPECT_EQ(g.values(), f.values());
  EXPECT_EQ(l1_distance(f, g), 0.5);
}

TEST(Averaged, IterateLawForSingleCoordinates) {
  const ShiftOperator t = ShiftOperator::averaged(4);
  const WindowFunction f = WindowFunction::coordinate(4, 3, {0.0, 1.0, 2.0, 5.0}).minus_constant(2.0);
  const double ratio = t.apply_power(f, 7).l2_norm() / f.l2_norm();
  EXPECT_NEAR(ratio, 2.0 / 9.0, 1e-12);
  // T^m of a function of x_k depends on x_{k+m}.
  EXPECT_EQ(t.apply_power(f, 7).first(), 10u);
}

TEST(Averaged, FirstCoordinateIsAveragedAway) {
  const ShiftOperator t = ShiftOperator::averaged(3);
  const WindowFunction f = WindowFunction::coordinate(3, 1, {0.0, 0.3, 0.9});
  const WindowFunction g = t.apply(f);
  for (double v : g.values()) EXPECT_NEAR(v, 0.4, 1e-15);
}

TEST(Averaged, PreservesMeanAndContracts) {
  std::mt19937_64 rng(1);
  const ShiftOperator t = ShiftOperator::averaged(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(8);
    for (double& x : v) x = unit_uniform(rng);
    const WindowFunction f(2, 1 + rng() % 4, 3, v);
    const WindowFunction g = t.apply(f);
    EXPECT_NEAR(g.mean(), f.mean(), 1e-15);
    EXPECT_LE(g.l2_norm(), f.l2_norm() + 1e-15);
  }
}

TEST(Shift, WindowOverflow) {
  const ShiftOperator t = ShiftOperator::koopman(2, 10);
  const WindowFunction f = WindowFunction::coordinate_indicator(2, 5, 1);
  EXPECT_EQ(error_code([&] { t.apply_power(f, 6); }), ErrorCode::WindowOverflow);
  EXPECT_EQ(t.apply_power(f, 5).first(), 10u);
}

TEST(EigenResidual, IsALowerBound) {
  using Complex = std::complex<double>;
  const ShiftOperator t = ShiftOperator::averaged(2);
  const double bound = min_eigen_residual(t, 2, 0.25);
  EXPECT_GE(bound, 0.1);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(4);
    for (double& x : v) x = unit_uniform(rng) - 0.5;
    WindowFunction f(2, 1, 2, v);
    f = f.minus_constant(f.mean());
    const double norm = f.l2_norm();
    std::vector<double> unit = f.values();
    for (double& x : unit) x /= norm;
    f = WindowFunction(2, 1, 2, unit);
    const std::vector<WindowFunction> pair{f, t.apply(f)};
    const auto m = materialize(pair);
    const double modulus = 0.25 + 1.5 * unit_uniform(rng);
    const Complex lambda = std::polar(modulus, 6.283 * unit_uniform(rng));
    const Eigen::VectorXcd r = m.functions[1].cast<Complex>() - lambda * m.functions[0].cast<Complex>();
    const double residual = std::sqrt(m.space.weight(0)) * r.norm();
    EXPECT_GE(residual, bound);
  }
}
