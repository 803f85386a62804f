#pragma once

// Symbolic backend for operators on the infinite product X_1 x X_2 x ...
// of discretized unit intervals.
//
// Each factor X_n is a grid of m midpoint atoms of mass 1/m, and the product
// carries the product measure. A WindowFunction depends only on the
// contiguous coordinates [first, last]; coordinates are numbered from 1. The
// shift operators below map such functions to functions of [first+1, last+1],
// so iterates stay finite tensors and no truncation of the measure is needed.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsent/space.hpp"

namespace dsent {

class WindowFunction {
 public:
  /// values[i] is the value at the grid point whose digit for coordinate
  /// first+j is (i / grid^j) % grid. Throws BadParameters.
  WindowFunction(std::size_t grid, std::size_t first, std::size_t width,
                 std::vector<double> values);

  /// f(x) = g(x_k).
  static WindowFunction coordinate(std::size_t grid, std::size_t k, std::vector<double> g);
  /// f(x) = g_0(x_first) g_1(x_first+1) ...
  static WindowFunction product(std::size_t grid, std::size_t first,
                                const std::vector<std::vector<double>>& factors);
  /// Indicator of {x : x_k = atom}.
  static WindowFunction coordinate_indicator(std::size_t grid, std::size_t k, std::size_t atom);

  std::size_t grid() const { return grid_; }
  std::size_t first() const { return first_; }
  std::size_t last() const { return first_ + width_ - 1; }
  std::size_t width() const { return width_; }
  const std::vector<double>& values() const { return values_; }

  double mean() const;
  double l2_norm() const;
  bool in_unit_range() const;

  /// Same function, window moved by `offset` coordinates.
  WindowFunction translated(std::size_t offset) const;
  /// f - c.
  WindowFunction minus_constant(double c) const;

 private:
  std::size_t grid_;
  std::size_t first_;
  std::size_t width_;
  std::vector<double> values_;
};

/// A finite list of window functions realized on the product of the union of
/// their coordinates (not the hull), with the uniform product weights.
struct MaterializedCollection {
  std::vector<std::size_t> coordinates;
  FiniteSpace space;
  std::vector<Eigen::VectorXd> functions;
};

/// Throws BadParameters (grids differ, empty input) and CellBudgetExceeded when
/// the product has more than `max_points` points.
MaterializedCollection materialize(std::span<const WindowFunction> functions,
                                   std::size_t max_points = 10'000'000);

/// int |f - g| and (int |f - g|^2)^(1/2) under the product measure.
double l1_distance(const WindowFunction& f, const WindowFunction& g);
double l2_distance(const WindowFunction& f, const WindowFunction& g);

/// Shift-type operator T = S R on window functions, with S the left shift
/// (Sf)(x_1, x_2, ...) = f(x_2, x_3, ...) and R the tensor product of the
/// per-coordinate maps R_n g = ((n-1)/n) g + (1/n) int g. The Koopman variant
/// takes every R_n to be the identity, leaving the pure left shift.
class ShiftOperator {
 public:
  enum class Kind { Averaged, Koopman };

  static constexpr std::size_t kDefaultMaxCoordinate = 1'000'000;

  static ShiftOperator averaged(std::size_t grid, std::size_t max_coordinate = kDefaultMaxCoordinate);
  static ShiftOperator koopman(std::size_t grid, std::size_t max_coordinate = kDefaultMaxCoordinate);

  Kind kind() const { return kind_; }
  std::size_t grid() const { return grid_; }
  std::size_t max_coordinate() const { return max_coordinate_; }

  /// Tf. Throws WindowOverflow past max_coordinate, BadParameters on a grid
  /// mismatch.
  WindowFunction apply(const WindowFunction& f) const;
  WindowFunction apply_power(const WindowFunction& f, std::uint64_t n) const;

 private:
  ShiftOperator(Kind kind, std::size_t grid, std::size_t max_coordinate)
      : kind_(kind), grid_(grid), max_coordinate_(max_coordinate) {}

  Kind kind_;
  std::size_t grid_;
  std::size_t max_coordinate_;
};

/// Apply the averaging map R_n along the axis of coordinate n of f.
WindowFunction average_coordinate(const WindowFunction& f, std::size_t n);

/// Lower bound on |Tf - lambda f|_2 over unit f orthogonal to constants that
/// depend on coordinates 1..window, and complex lambda with
/// min_modulus <= |lambda|. Computed on a lattice of lambda with spacing
/// `step` and corrected by the Lipschitz constant of the residual in lambda.
double min_eigen_residual(const ShiftOperator& t, std::size_t window, double min_modulus,
                          double step = 0.02);

}  // namespace dsent
