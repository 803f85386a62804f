#pragma once

// Doubly stochastic operators on finite spaces, given by transition matrices.
//
// (Tf)(x) = sum_y P[x][y] f(y). Validity means P >= 0 entrywise, every row
// sums to one (T1 = 1) and mu^T P = mu^T (the integral is preserved).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dsent/space.hpp"

namespace dsent {

class DenseOperator {
 public:
  /// Throws DimensionMismatch, NegativeEntry, RowMassError, StationarityError.
  static DenseOperator from_matrix(FiniteSpace space, Eigen::MatrixXd kernel,
                                   double tolerance = kMassTolerance);

  const FiniteSpace& space() const { return space_; }
  const Eigen::MatrixXd& matrix() const { return kernel_; }
  std::size_t size() const { return space_.size(); }

  /// Tf. Throws DimensionMismatch.
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
  /// T^n f, by repeated application for small n and matrix powers otherwise.
  Eigen::VectorXd apply_power(const Eigen::VectorXd& f, std::uint64_t n) const;
  /// Applies T to every member; values are clamped back into [0,1] to absorb
  /// rounding.
  Collection apply(const Collection& f) const;

  /// Matrix of T^n, by repeated squaring.
  Eigen::MatrixXd power_matrix(std::uint64_t n) const;

 private:
  DenseOperator(FiniteSpace space, Eigen::MatrixXd kernel)
      : space_(std::move(space)), kernel_(std::move(kernel)) {}

  FiniteSpace space_;
  Eigen::MatrixXd kernel_;
};

/// Checks (i)-(iii) without constructing; throws like from_matrix.
void validate_doubly_stochastic(const FiniteSpace& space, const Eigen::MatrixXd& kernel,
                                double tolerance = kMassTolerance);

/// Koopman operator f -> f o phi. Throws DimensionMismatch, BadParameters
/// (map leaves the space) or NotInvariant (mu is not phi-invariant).
DenseOperator koopman_from_map(const FiniteSpace& space, std::span<const std::size_t> phi);

/// Sf = int f dmu, as the constant function.
DenseOperator mean_projection(const FiniteSpace& space);

/// (1 - mix_alpha) T + mix_alpha U. Throws SpaceMismatch, AlphaRange.
DenseOperator convex_combination(double mix_alpha, const DenseOperator& t, const DenseOperator& u);

/// Operator norm of `a` on L1(mu): max over y of sum_x mu(x)|a[x][y]| / mu(y),
/// attained at the normalized point masses.
double l1_operator_norm(const FiniteSpace& space, const Eigen::MatrixXd& a);

/// x -> x + step (mod q) on the uniform q-point space.
DenseOperator cyclic_permutation(std::size_t q, std::size_t step = 1);

enum class AnnulusVariant { Plain, Modified };

/// Point layout of the discretized annulus Z_q x {0..m-1}: for each circle
/// position z the indices of the points in its fiber. In the modified variant
/// fibers over the half circle z >= q/2 carry a single point (fiber index 0).
std::vector<std::vector<std::size_t>> annulus_fibers(std::size_t q, std::size_t m,
                                                     AnnulusVariant variant);

/// Rotation by `steps`/q on the circle coordinate combined with fiber
/// averaging (plain), or, in the modified variant, fiber averaging over the
/// half circle and evaluation at fiber point 0 elsewhere. Throws BadParameters.
DenseOperator annulus_operator(std::size_t q, std::size_t m, std::size_t steps,
                               AnnulusVariant variant);

/// 1/2 (f o R) + 1/2 int f, with R the rotation by steps/q on Z_q.
DenseOperator contraction_rotation_operator(std::size_t q, std::size_t steps);

}  // namespace dsent
