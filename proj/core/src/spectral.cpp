#include "dsent/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dsent/error.hpp"

namespace dsent {

namespace {

constexpr double kRankCutoff = 1e-10;
// Singular values this close above the cutoff make a rank decision unreliable.
constexpr double kGrayZoneFactor = 1e2;
constexpr double kSylvesterTolerance = 1e-6;

Eigen::VectorXd sqrt_weights(const FiniteSpace& space) { return space.weights().cwiseSqrt(); }

// A = D P D^{-1}.
Eigen::MatrixXd weighted_matrix(const DenseOperator& t) {
  const Eigen::VectorXd d = sqrt_weights(t.space());
  return d.asDiagonal() * t.matrix() * d.cwiseInverse().asDiagonal();
}

Eigen::MatrixXd to_functions(const FiniteSpace& space, const Eigen::MatrixXd& q) {
  return sqrt_weights(space).cwiseInverse().asDiagonal() * q;
}

Eigen::MatrixXd to_weighted(const FiniteSpace& space, const Eigen::MatrixXd& f) {
  return sqrt_weights(space).asDiagonal() * f;
}

// Orthonormal basis of span{Re v, Im v} for a conjugation-closed complex
// subspace of dimension k.
Eigen::MatrixXd realify(const Eigen::MatrixXcd& v, Eigen::Index k) {
  const Eigen::Index n = v.rows();
  if (k == 0) return Eigen::MatrixXd(n, 0);
  Eigen::MatrixXd stacked(n, 2 * v.cols());
  stacked << v.real(), v.imag();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double top = s[0];
  if (!(s[k - 1] > 1e-8 * top) || (s.size() > k && s[k] > 1e-6 * top)) {
    throw Error(ErrorCode::IllConditionedSplit,
                "invariant subspace is not closed under conjugation (dimension " +
                    std::to_string(k) + ")");
  }
  return svd.matrixU().leftCols(k);
}

// Kernel of a symmetric positive semidefinite matrix.
Eigen::MatrixXd psd_kernel(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "symmetric eigensolver failed");
  const auto& values = eig.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  const double cutoff = kRankCutoff * scale;
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] <= cutoff) {
      ++count;
    } else if (values[i] <= kGrayZoneFactor * cutoff) {
      throw Error(ErrorCode::RankToleranceFailure,
                  "eigenvalue " + std::to_string(values[i]) + " is too close to the rank cutoff");
    }
  }
  // Ascending order: the kernel is the leading block.
  return eig.eigenvectors().leftCols(count);
}

// Right kernel of a general matrix, as orthonormal columns.
Eigen::MatrixXd right_kernel(const Eigen::MatrixXd& m) {
  const Eigen::Index k = m.cols();
  if (k == 0) return Eigen::MatrixXd(0, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s[0] : 0.0);
  const double cutoff = kRankCutoff * scale;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) {
      if (s[i] <= kGrayZoneFactor * cutoff) {
        throw Error(ErrorCode::RankToleranceFailure,
                    "singular value " + std::to_string(s[i]) + " is too close to the rank cutoff");
      }
      ++rank;
    }
  }
  return svd.matrixV().rightCols(k - rank);
}

// Intersection of two subspaces with orthonormal bases via principal angles.
Eigen::MatrixXd intersect(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() == 0 || b.cols() == 0) return Eigen::MatrixXd(a.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose() * b, Eigen::ComputeFullU);
  const auto& cosines = svd.singularValues();
  Eigen::Index count = 0;
  while (count < cosines.size() && cosines[count] > 1.0 - kRankCutoff) ++count;
  return a * svd.matrixU().leftCols(count);
}

double column_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  if (q.cols() == 0) return 0.0;
  const Eigen::MatrixXd image = a * q;
  const Eigen::MatrixXd off = image - q * (q.transpose() * image);
  return off.colwise().norm().maxCoeff();
}

std::vector<Complex> diagonal(const Eigen::MatrixXcd& t, Eigen::Index from, Eigen::Index to) {
  std::vector<Complex> out;
  for (Eigen::Index i = from; i < to; ++i) out.push_back(t(i, i));
  return out;
}

double max_modulus(const std::vector<Complex>& values) {
  double r = 0.0;
  for (const auto& v : values) r = std::max(r, std::abs(v));
  return r;
}

// Apply the plane rotation [c s; -conj(s) c] to the pair (x, y) elementwise.
template <typename X, typename Y>
void rotate(X&& x, Y&& y, double c, Complex s) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Complex tmp = c * x[i] + s * y[i];
    y[i] = c * y[i] - std::conj(s) * x[i];
    x[i] = tmp;
  }
}

}  // namespace

DenseOperator mu_adjoint(const DenseOperator& t) {
  const Eigen::VectorXd& mu = t.space().weights();
  const Eigen::Index n = mu.size();
  Eigen::MatrixXd adj(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) adj(y, x) = mu[x] * t.matrix()(x, y) / mu[y];
  }
  // Row sums of the adjoint carry the stationarity error of P divided by mu(y).
  const double tolerance = std::max(kMassTolerance, kMassTolerance / mu.minCoeff());
  return DenseOperator::from_matrix(t.space(), std::move(adj), tolerance);
}

void swap_schur_entries(Eigen::MatrixXcd& triangular, Eigen::MatrixXcd& unitary, Eigen::Index k) {
  const Eigen::Index n = triangular.rows();
  const Complex t11 = triangular(k, k);
  const Complex t22 = triangular(k + 1, k + 1);
  // Rotation G with G [t12; t22 - t11] = [r; 0].
  const Complex f = triangular(k, k + 1);
  const Complex g = t22 - t11;
  double c = 1.0;
  Complex s = 0.0;
  if (g != Complex(0.0)) {
    if (f == Complex(0.0)) {
      c = 0.0;
      s = std::conj(g) / std::abs(g);
    } else {
      const double norm = std::hypot(std::abs(f), std::abs(g));
      c = std::abs(f) / norm;
      s = (f / std::abs(f)) * std::conj(g) / norm;
    }
  }
  if (k + 2 < n) {
    rotate(triangular.row(k).tail(n - k - 2), triangular.row(k + 1).tail(n - k - 2), c, s);
  }
  rotate(triangular.col(k).head(k), triangular.col(k + 1).head(k), c, std::conj(s));
  triangular(k, k) = t22;
  triangular(k + 1, k + 1) = t11;
  rotate(unitary.col(k), unitary.col(k + 1), c, std::conj(s));
}

OrderedSchur ordered_schur(const Eigen::MatrixXd& a, const std::function<bool(Complex)>& select) {
  OrderedSchur out;
  const Eigen::Index n = a.rows();
  if (n == 0) return out;
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a.cast<Complex>(), true);
  if (schur.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "complex Schur failed");
  out.unitary = schur.matrixU();
  out.triangular = schur.matrixT().triangularView<Eigen::Upper>();

  std::vector<char> selected(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) selected[i] = select(out.triangular(i, i)) ? 1 : 0;
  Eigen::Index placed = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!selected[k]) continue;
    for (Eigen::Index j = k - 1; j >= placed; --j) {
      swap_schur_entries(out.triangular, out.unitary, j);
      std::swap(selected[j], selected[j + 1]);
    }
    ++placed;
  }
  out.leading = placed;
  return out;
}

InvariantPair split_by_spectrum(const Eigen::MatrixXd& a, const std::function<bool(Complex)>& select) {
  const Eigen::Index n = a.rows();
  const OrderedSchur schur = ordered_schur(a, select);
  const Eigen::Index p = schur.leading;
  const Eigen::Index q = n - p;
  const Eigen::MatrixXcd& t = schur.triangular;
  const Eigen::MatrixXcd& u = schur.unitary;

  InvariantPair out;
  out.leading_eigenvalues = diagonal(t, 0, p);
  out.complement_eigenvalues = diagonal(t, p, n);
  out.leading = realify(u.leftCols(p), p);

  if (q == 0) {
    out.complement = Eigen::MatrixXd(n, 0);
    return out;
  }
  if (p == 0) {
    out.complement = Eigen::MatrixXd::Identity(n, n);
    return out;
  }

  // Block decoupling: T11 X - X T22 = -T12, solved column by column.
  const Eigen::MatrixXcd t11 = t.topLeftCorner(p, p);
  const Eigen::MatrixXcd t12 = t.topRightCorner(p, q);
  const Eigen::MatrixXcd t22 = t.bottomRightCorner(q, q);
  Eigen::MatrixXcd x(p, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    Eigen::VectorXcd rhs = -t12.col(j);
    for (Eigen::Index i = 0; i < j; ++i) rhs += x.col(i) * t22(i, j);
    Eigen::MatrixXcd shifted = t11;
    shifted.diagonal().array() -= t22(j, j);
    if (shifted.diagonal().cwiseAbs().minCoeff() < 1e-14) {
      throw Error(ErrorCode::IllConditionedSplit, "selected and remaining spectra touch");
    }
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  const Eigen::MatrixXcd residual = t11 * x - x * t22 + t12;
  out.decoupling_residual = residual.norm() / std::max(1.0, t12.norm());
  if (!(out.decoupling_residual <= kSylvesterTolerance)) {
    throw Error(ErrorCode::IllConditionedSplit,
                "decoupling residual " + std::to_string(out.decoupling_residual));
  }
  const Eigen::MatrixXcd complement = u.leftCols(p) * x + u.rightCols(q);
  out.complement = realify(complement, q);
  return out;
}

SpectralSplit jdlg_decompose(const DenseOperator& t, double eps_spec) {
  if (!(eps_spec > 0.0 && eps_spec < 0.5)) {
    throw Error(ErrorCode::BadParameters, "peripheral threshold must lie in (0, 0.5)");
  }
  const Eigen::MatrixXd a = weighted_matrix(t);
  const InvariantPair pair =
      split_by_spectrum(a, [eps_spec](Complex z) { return std::abs(z) >= 1.0 - eps_spec; });

  SpectralSplit out{t.space(), to_functions(t.space(), pair.leading),
                    to_functions(t.space(), pair.complement), pair.leading_eigenvalues, {}};
  out.all_eigenvalues = pair.leading_eigenvalues;
  out.all_eigenvalues.insert(out.all_eigenvalues.end(), pair.complement_eigenvalues.begin(),
                             pair.complement_eigenvalues.end());
  out.aws_spectral_radius = max_modulus(pair.complement_eigenvalues);
  out.decoupling_residual = pair.decoupling_residual;
  out.rev_invariance_residual = column_residual(a, pair.leading);
  out.aws_invariance_residual = column_residual(a, pair.complement);
  return out;
}

UnitarySplit nf_decompose(const DenseOperator& t) {
  const Eigen::MatrixXd a = weighted_matrix(t);
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd v = intersect(psd_kernel(id - a.transpose() * a), psd_kernel(id - a * a.transpose()));
  UnitarySplit out{t.space(), {}, {}};
  while (v.cols() > 0) {
    // Within V, keep x with A x in V and A^T x in V.
    const Eigen::MatrixXd leak = id - v * v.transpose();
    Eigen::MatrixXd stacked(2 * n, v.cols());
    stacked << leak * a * v, leak * a.transpose() * v;
    const Eigen::MatrixXd keep = right_kernel(stacked);
    ++out.iterations;
    if (keep.cols() == v.cols()) break;
    v = v * keep;
  }

  Eigen::MatrixXd cnu;
  if (v.cols() == n) {
    cnu = Eigen::MatrixXd(n, 0);
  } else if (v.cols() == 0) {
    cnu = id;
  } else {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
    const Eigen::MatrixXd full = qr.householderQ();
    cnu = full.rightCols(n - v.cols());
  }

  out.reducing_residual = std::max(column_residual(a, v), column_residual(a.transpose(), v));
  if (v.cols() > 0) {
    const Eigen::MatrixXd image = a * v;
    out.isometry_residual =
        (image.transpose() * image - Eigen::MatrixXd::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
  }
  out.uni_basis = to_functions(t.space(), v);
  out.cnu_basis = to_functions(t.space(), cnu);
  return out;
}

double subspace_spectral_radius(const DenseOperator& t, const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return 0.0;
  const Eigen::MatrixXd a = weighted_matrix(t);
  const Eigen::MatrixXd y = to_weighted(t.space(), basis);
  const Eigen::MatrixXd image = a * y;
  const Eigen::MatrixXd compressed = y.colPivHouseholderQr().solve(image);
  const double residual = (image - y * compressed).norm() / std::max(1.0, y.norm());
  if (!(residual <= 1e-9)) {
    throw Error(ErrorCode::NotInvariant,
                "span is not invariant (residual " + std::to_string(residual) + ")");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> eig(compressed, false);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "eigensolver failed");
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

QuasiCompactReport quasi_compact_classify(const DenseOperator& t, double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::BadParameters, "radius must lie in (0,1)");
  const Eigen::MatrixXd a = weighted_matrix(t);
  Eigen::EigenSolver<Eigen::MatrixXd> eig(a, false);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "eigensolver failed");
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (std::abs(std::abs(eig.eigenvalues()[i]) - r) < 1e-10) {
      throw Error(ErrorCode::REqualsEigenvalueModulus,
                  "an eigenvalue has modulus " + std::to_string(std::abs(eig.eigenvalues()[i])));
    }
  }
  const InvariantPair pair = split_by_spectrum(a, [r](Complex z) { return std::abs(z) > r; });

  QuasiCompactReport out;
  out.f_dim = pair.leading_eigenvalues.size();
  for (const auto& z : pair.leading_eigenvalues) out.peripheral_moduli.push_back(std::abs(z));
  std::sort(out.peripheral_moduli.rbegin(), out.peripheral_moduli.rend());
  out.interior_radius = max_modulus(pair.complement_eigenvalues);
  out.invariance_residual =
      std::max(column_residual(a, pair.leading), column_residual(a, pair.complement));
  out.is_quasi_compact = out.interior_radius < r && out.invariance_residual <= 1e-9;
  return out;
}

Eigen::MatrixXd mu_orthonormalize(const FiniteSpace& space, const Eigen::MatrixXd& vectors) {
  const Eigen::Index n = static_cast<Eigen::Index>(space.size());
  if (vectors.cols() == 0) return Eigen::MatrixXd(n, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_weighted(space, vectors), Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > kRankCutoff * s[0]) ++rank;
  return to_functions(space, svd.matrixU().leftCols(rank));
}

double max_principal_angle(const FiniteSpace& space, const Eigen::MatrixXd& a,
                           const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = to_weighted(space, mu_orthonormalize(space, a));
  const Eigen::MatrixXd qb = to_weighted(space, mu_orthonormalize(space, b));
  if (qa.cols() != qb.cols()) return std::numbers::pi / 2;
  if (qa.cols() == 0) return 0.0;
  const Eigen::MatrixXd off = qa - qb * (qb.transpose() * qa);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(off);
  return std::asin(std::min(1.0, svd.singularValues()[0]));
}

double containment_residual(const FiniteSpace& space, const Eigen::MatrixXd& inner,
                            const Eigen::MatrixXd& outer) {
  const Eigen::MatrixXd qi = to_weighted(space, mu_orthonormalize(space, inner));
  if (qi.cols() == 0) return 0.0;
  const Eigen::MatrixXd qo = to_weighted(space, mu_orthonormalize(space, outer));
  const Eigen::MatrixXd off = qo.cols() ? Eigen::MatrixXd(qi - qo * (qo.transpose() * qi)) : qi;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(off);
  return svd.singularValues()[0];
}

double invariance_residual(const DenseOperator& t, const Eigen::MatrixXd& basis) {
  return column_residual(weighted_matrix(t), to_weighted(t.space(), basis));
}

}  // namespace dsent
