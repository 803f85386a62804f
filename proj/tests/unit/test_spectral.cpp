#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "dsent/sampling.hpp"
#include "dsent/spectral.hpp"
#include "oracles.hpp"

using namespace dsent;
using oracle::error_code;

namespace {

DenseOperator circulant() {
  Eigen::Matrix3d p;
  p << 0.5, 0.5, 0.0,
       0.0, 0.5, 0.5,
       0.5, 0.0, 0.5;
  return DenseOperator::from_matrix(FiniteSpace::uniform(3), p);
}

Eigen::MatrixXd constants(std::size_t n) { return Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), 1); }

// Random operator on dyadic weights, so that mu(x) P / mu(y) is exact.
DenseOperator dyadic_operator(std::mt19937_64& rng) {
  const FiniteSpace s = FiniteSpace::make(Eigen::Vector4d(0.125, 0.125, 0.25, 0.5));
  return marginal_scaling_sample(s, rng);
}

}  // namespace

TEST(Adjoint, SpecExamples) {
  Eigen::Matrix3d sym;
  sym << 0.5, 0.25, 0.25,
         0.25, 0.5, 0.25,
         0.25, 0.25, 0.5;
  const DenseOperator t = DenseOperator::from_matrix(FiniteSpace::uniform(3), sym);
  EXPECT_EQ(mu_adjoint(t).matrix(), sym.transpose());

  const DenseOperator perm = cyclic_permutation(4);
  EXPECT_EQ(mu_adjoint(perm).matrix(), cyclic_permutation(4, 3).matrix());

  const DenseOperator half = mean_projection(FiniteSpace::uniform(2));
  EXPECT_EQ(mu_adjoint(half).matrix(), half.matrix());
}

TEST(Adjoint, IsTheMuAdjoint) {
  std::mt19937_64 rng(3);
  const FiniteSpace s = oracle::random_space(6, rng);
  const DenseOperator t = marginal_scaling_sample(s, rng);
  const DenseOperator a = mu_adjoint(t);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd f = Eigen::VectorXd::Random(6);
    const Eigen::VectorXd g = Eigen::VectorXd::Random(6);
    EXPECT_NEAR(s.inner(t.apply(f), g), s.inner(f, a.apply(g)), 1e-14);
  }
}

TEST(Adjoint, InvolutionExactOnDyadicWeights) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const DenseOperator t = dyadic_operator(rng);
    EXPECT_EQ(mu_adjoint(mu_adjoint(t)).matrix(), t.matrix());
  }
}

TEST(Adjoint, InvolutionWithinUlpsOtherwise) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const DenseOperator t = marginal_scaling_sample(oracle::random_space(5, rng), rng);
    const Eigen::MatrixXd back = mu_adjoint(mu_adjoint(t)).matrix();
    EXPECT_LE((back - t.matrix()).cwiseAbs().maxCoeff(), 4 * std::numeric_limits<double>::epsilon());
  }
}

TEST(Schur, SwapKeepsFactorization) {
  Eigen::MatrixXcd t(3, 3);
  t << 1.0, 2.0, 3.0,
       0.0, Complex(0.5, 0.5), 1.0,
       0.0, 0.0, -0.25;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(3, 3);
  const Eigen::MatrixXcd a = t;
  swap_schur_entries(t, u, 0);
  swap_schur_entries(t, u, 1);
  EXPECT_LT((u * t * u.adjoint() - a).norm(), 1e-14);
  EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-14);
  EXPECT_LT(std::abs(t(2, 2) - 1.0), 1e-15);
  EXPECT_LT(std::abs(t(1, 0)) + std::abs(t(2, 0)) + std::abs(t(2, 1)), 1e-15);
}

TEST(Schur, OrderedSelectionLeads) {
  std::mt19937_64 rng(9);
  const DenseOperator p = sinkhorn_sample(9, rng);
  const OrderedSchur s = ordered_schur(p.matrix(), [](Complex z) { return std::abs(z) > 0.1; });
  for (Eigen::Index i = 0; i < 9; ++i) {
    EXPECT_EQ(std::abs(s.triangular(i, i)) > 0.1, i < s.leading);
  }
  EXPECT_LT((s.unitary * s.triangular * s.unitary.adjoint() - p.matrix().cast<Complex>()).norm(), 1e-13);
}

TEST(Jdlg, Permutation) {
  const SpectralSplit s = jdlg_decompose(cyclic_permutation(3));
  EXPECT_EQ(s.rev_basis.cols(), 3);
  EXPECT_EQ(s.aws_basis.cols(), 0);
  EXPECT_EQ(s.peripheral_eigenvalues.size(), 3u);
}

TEST(Jdlg, MeanProjection) {
  const DenseOperator t = mean_projection(FiniteSpace::make(Eigen::Vector4d(0.1, 0.2, 0.3, 0.4)));
  const SpectralSplit s = jdlg_decompose(t);
  EXPECT_EQ(s.rev_basis.cols(), 1);
  EXPECT_EQ(s.aws_basis.cols(), 3);
  EXPECT_LT(s.aws_spectral_radius, 1e-12);
  EXPECT_LT(containment_residual(t.space(), constants(4), s.rev_basis), 1e-12);
}

TEST(Jdlg, ContractionRotation) {
  const SpectralSplit s = jdlg_decompose(contraction_rotation_operator(8, 1));
  EXPECT_EQ(s.rev_basis.cols(), 1);
  EXPECT_NEAR(s.aws_spectral_radius, 0.5, 1e-12);
}

TEST(Jdlg, BasesAreMuOrthonormalAndInvariant) {
  for (const auto& t : test_corpus(40, 13)) {
    const SpectralSplit s = jdlg_decompose(t);
    const Eigen::MatrixXd d = t.space().weights().asDiagonal();
    const auto check = [&](const Eigen::MatrixXd& b) {
      if (b.cols() == 0) return;
      const Eigen::MatrixXd gram = b.transpose() * d * b;
      EXPECT_LT((gram - Eigen::MatrixXd::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT(invariance_residual(t, b), 1e-9);
    };
    check(s.rev_basis);
    check(s.aws_basis);
    EXPECT_EQ(s.rev_basis.cols() + s.aws_basis.cols(), static_cast<Eigen::Index>(t.size()));
    Eigen::MatrixXd both(s.rev_basis.rows(), t.size());
    both << s.rev_basis, s.aws_basis;
    EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(both).setThreshold(1e-9).rank(), static_cast<Eigen::Index>(t.size()));
    EXPECT_LT(containment_residual(t.space(), constants(t.size()), s.rev_basis), 1e-9);
  }
}

TEST(Jdlg, BadThreshold) {
  EXPECT_EQ(error_code([] { jdlg_decompose(cyclic_permutation(3), 0.0); }), ErrorCode::BadParameters);
  EXPECT_EQ(error_code([] { jdlg_decompose(cyclic_permutation(3), 0.5); }), ErrorCode::BadParameters);
}

TEST(Nf, SpecExamples) {
  const UnitarySplit perm = nf_decompose(cyclic_permutation(4));
  EXPECT_EQ(perm.uni_basis.cols(), 4);
  EXPECT_EQ(perm.cnu_basis.cols(), 0);

  const DenseOperator half = mean_projection(FiniteSpace::uniform(2));
  const UnitarySplit m = nf_decompose(half);
  EXPECT_EQ(m.uni_basis.cols(), 1);
  EXPECT_LT(max_principal_angle(half.space(), m.uni_basis, constants(2)), 1e-12);

  const UnitarySplit c = nf_decompose(circulant());
  EXPECT_EQ(c.uni_basis.cols(), 1);
  EXPECT_EQ(c.cnu_basis.cols(), 2);
}

TEST(Nf, ReducingAndIsometric) {
  for (const auto& t : test_corpus(40, 17)) {
    const UnitarySplit u = nf_decompose(t);
    EXPECT_LT(u.reducing_residual, 1e-9);
    EXPECT_LT(u.isometry_residual, 1e-9);
    EXPECT_LT(invariance_residual(mu_adjoint(t), u.uni_basis), 1e-9);
    EXPECT_LT(invariance_residual(t, u.cnu_basis), 1e-9);
    EXPECT_LT(invariance_residual(mu_adjoint(t), u.cnu_basis), 1e-9);
    EXPECT_LE(u.iterations, t.size() + 1);
  }
}

TEST(SubspaceRadius, SpecExamples) {
  const DenseOperator m = mean_projection(FiniteSpace::uniform(4));
  EXPECT_LT(subspace_spectral_radius(m, jdlg_decompose(m).aws_basis), 1e-12);
  const DenseOperator c = contraction_rotation_operator(8, 1);
  EXPECT_NEAR(subspace_spectral_radius(c, jdlg_decompose(c).aws_basis), 0.5, 1e-12);
  std::mt19937_64 rng(1);
  const DenseOperator r = sinkhorn_sample(6, rng);
  EXPECT_NEAR(subspace_spectral_radius(r, Eigen::MatrixXd::Identity(6, 6)), 1.0, 1e-12);
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(6, 1);
  e1(0, 0) = 1.0;
  EXPECT_EQ(error_code([&] { subspace_spectral_radius(r, e1); }), ErrorCode::NotInvariant);
}

TEST(QuasiCompact, SpecExamples) {
  const QuasiCompactReport m = quasi_compact_classify(mean_projection(FiniteSpace::uniform(3)), 0.5);
  EXPECT_TRUE(m.is_quasi_compact);
  EXPECT_EQ(m.f_dim, 1u);
  EXPECT_LT(m.interior_radius, 1e-12);

  const QuasiCompactReport c = quasi_compact_classify(circulant(), 0.75);
  EXPECT_TRUE(c.is_quasi_compact);
  EXPECT_EQ(c.f_dim, 1u);
  EXPECT_NEAR(c.interior_radius, 0.5, 1e-12);

  const QuasiCompactReport p = quasi_compact_classify(cyclic_permutation(3), 0.5);
  EXPECT_TRUE(p.is_quasi_compact);
  EXPECT_EQ(p.f_dim, 3u);
  EXPECT_EQ(p.interior_radius, 0.0);
}

TEST(QuasiCompact, Errors) {
  EXPECT_EQ(error_code([] { quasi_compact_classify(circulant(), 0.5); }), ErrorCode::REqualsEigenvalueModulus);
  EXPECT_EQ(error_code([] { quasi_compact_classify(circulant(), 1.0); }), ErrorCode::BadParameters);
}

TEST(Subspaces, AnglesAndContainment) {
  const FiniteSpace s = FiniteSpace::make(Eigen::Vector3d(0.25, 0.25, 0.5));
  Eigen::MatrixXd a(3, 1);
  a << 1, 0, 0;
  Eigen::MatrixXd b(3, 2);
  b << 1, 0,
       1, 1,
       0, 0;
  EXPECT_NEAR(containment_residual(s, a, b), 0.0, 1e-15);
  EXPECT_GT(containment_residual(s, b, a), 0.5);
  EXPECT_NEAR(max_principal_angle(s, a, 2.0 * a), 0.0, 1e-15);
  EXPECT_NEAR(max_principal_angle(s, a, b), std::acos(0.0), 1e-15);
  EXPECT_EQ(mu_orthonormalize(s, b).cols(), 2);
}
