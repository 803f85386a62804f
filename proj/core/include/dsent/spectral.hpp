#pragma once

// Spectral splittings of dense doubly stochastic operators in the
// mu-weighted L2 geometry <f, g> = sum_x mu(x) f(x) g(x).
//
// Internally everything is done on A = D P D^{-1} with D = diag(sqrt(mu)),
// which turns the mu-weighted inner product into the Euclidean one and the
// mu-adjoint into the transpose. Bases returned to callers are functions on
// the space again (columns of the returned matrices).

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dsent/operator.hpp"

namespace dsent {

using Complex = std::complex<double>;

/// Matrix of T* with respect to <.,.>_mu: P*[y][x] = mu(x) P[x][y] / mu(y).
/// The result is validated as doubly stochastic for the same mu.
DenseOperator mu_adjoint(const DenseOperator& t);

/// Complex Schur form A = U T U^* with the selected eigenvalues leading the
/// diagonal of T.
struct OrderedSchur {
  Eigen::MatrixXcd unitary;
  Eigen::MatrixXcd triangular;
  Eigen::Index leading = 0;
};

/// Throws EigenFailure.
OrderedSchur ordered_schur(const Eigen::MatrixXd& a, const std::function<bool(Complex)>& select);

/// Swap the adjacent diagonal entries k and k+1 of an upper triangular
/// Schur factor, updating the unitary factor (one Givens rotation).
void swap_schur_entries(Eigen::MatrixXcd& triangular, Eigen::MatrixXcd& unitary, Eigen::Index k);

/// Invariant subspace pair from an ordered Schur form: the leading block's
/// subspace and the complementary spectral subspace obtained by solving the
/// Sylvester equation T11 X - X T22 = -T12. Both bases are real and
/// Euclidean-orthonormal (A coordinates).
struct InvariantPair {
  Eigen::MatrixXd leading;
  Eigen::MatrixXd complement;
  std::vector<Complex> leading_eigenvalues;
  std::vector<Complex> complement_eigenvalues;
  double decoupling_residual = 0.0;
};

/// Throws EigenFailure, IllConditionedSplit.
InvariantPair split_by_spectrum(const Eigen::MatrixXd& a, const std::function<bool(Complex)>& select);

struct SpectralSplit {
  FiniteSpace space;
  /// mu-orthonormal basis of E_rev (columns).
  Eigen::MatrixXd rev_basis;
  /// mu-orthonormal basis of E_aws (columns).
  Eigen::MatrixXd aws_basis;
  std::vector<Complex> peripheral_eigenvalues;
  std::vector<Complex> all_eigenvalues;
  double aws_spectral_radius = 0.0;
  double decoupling_residual = 0.0;
  double rev_invariance_residual = 0.0;
  double aws_invariance_residual = 0.0;
};

inline constexpr double kDefaultPeripheralEps = 1e-8;

/// JdLG splitting: E_rev is spanned by the eigenvectors with |lambda| >=
/// 1 - eps, E_aws is the complementary spectral subspace. Throws
/// BadParameters (eps outside (0, 0.5)), EigenFailure, IllConditionedSplit.
SpectralSplit jdlg_decompose(const DenseOperator& t, double eps_spec = kDefaultPeripheralEps);

struct UnitarySplit {
  FiniteSpace space;
  /// mu-orthonormal basis of H_uni.
  Eigen::MatrixXd uni_basis;
  /// mu-orthonormal basis of H_cnu = H_uni^perp.
  Eigen::MatrixXd cnu_basis;
  std::size_t iterations = 0;
  double reducing_residual = 0.0;
  double isometry_residual = 0.0;
};

/// NF splitting: H_uni is the largest subspace of ker(I - T*T) n ker(I - TT*)
/// invariant under T and T*, found by iterating V <- V n T^-1 V n (T*)^-1 V.
/// Throws RankToleranceFailure when a rank decision is ambiguous.
UnitarySplit nf_decompose(const DenseOperator& t);

/// Largest |eigenvalue| of T compressed to span(basis) (functions as
/// columns). Throws NotInvariant when the span is not T-invariant.
double subspace_spectral_radius(const DenseOperator& t, const Eigen::MatrixXd& basis);

struct QuasiCompactReport {
  bool is_quasi_compact = false;
  std::size_t f_dim = 0;
  std::vector<double> peripheral_moduli;
  double interior_radius = 0.0;
  double invariance_residual = 0.0;
};

/// F = spectral subspace of |lambda| > r, H its spectral complement.
/// Throws BadParameters (r outside (0,1)) and REqualsEigenvalueModulus.
QuasiCompactReport quasi_compact_classify(const DenseOperator& t, double r);

// Subspace utilities on mu-weighted function bases.

/// mu-orthonormal basis of the span of the columns (rank cutoff 1e-10 relative).
Eigen::MatrixXd mu_orthonormalize(const FiniteSpace& space, const Eigen::MatrixXd& vectors);

/// Largest principal angle between span(a) and span(b) in the mu geometry;
/// pi/2 when the dimensions differ.
double max_principal_angle(const FiniteSpace& space, const Eigen::MatrixXd& a,
                           const Eigen::MatrixXd& b);

/// max over mu-unit columns v of span(inner) of |v - proj_outer v|_mu: zero
/// iff span(inner) is contained in span(outer).
double containment_residual(const FiniteSpace& space, const Eigen::MatrixXd& inner,
                            const Eigen::MatrixXd& outer);

/// max over columns b of |T b - proj_span T b|_mu for a mu-orthonormal basis.
double invariance_residual(const DenseOperator& t, const Eigen::MatrixXd& basis);

}  // namespace dsent
