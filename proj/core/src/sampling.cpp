#include "dsent/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "dsent/error.hpp"

namespace dsent {

namespace {

constexpr double kScalingTolerance = 1e-12;
constexpr std::size_t kMaxScalingSweeps = 100000;

Eigen::MatrixXd positive_matrix(std::size_t n, std::mt19937_64& rng) {
  const auto k = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = 0.05 + unit_uniform(rng);
  }
  return m;
}

// Scales q so that its row sums approach `rows` and column sums `cols`.
void scale_to_marginals(Eigen::MatrixXd& q, const Eigen::VectorXd& rows, const Eigen::VectorXd& cols) {
  for (std::size_t sweep = 0; sweep < kMaxScalingSweeps; ++sweep) {
    q.array().colwise() *= (rows.array() / q.rowwise().sum().array());
    q.array().rowwise() *= (cols.transpose().array() / q.colwise().sum().array());
    const double row_dev = ((q.rowwise().sum() - rows).array() / rows.array()).abs().maxCoeff();
    const double col_dev = ((q.colwise().sum().transpose() - cols).array() / cols.array()).abs().maxCoeff();
    if (row_dev < kScalingTolerance && col_dev < kScalingTolerance) return;
  }
  throw Error(ErrorCode::ScalingNotConverged, "marginal scaling did not settle");
}

DenseOperator block_cycle(std::size_t blocks, std::size_t width, std::mt19937_64& rng) {
  const std::size_t n = blocks * width;
  const auto perm = random_permutation(n, rng);
  const auto k = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
  // Points perm[b*width + i] form block b; each row spreads over the next block.
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t next = (b + 1) % blocks;
    for (std::size_t i = 0; i < width; ++i) {
      for (std::size_t j = 0; j < width; ++j) {
        p(static_cast<Eigen::Index>(perm[b * width + i]), static_cast<Eigen::Index>(perm[next * width + j])) =
            1.0 / static_cast<double>(width);
      }
    }
  }
  return DenseOperator::from_matrix(FiniteSpace::uniform(n), std::move(p));
}

}  // namespace

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(out[i - 1], out[rng() % i]);
  return out;
}

DenseOperator sinkhorn_sample(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw Error(ErrorCode::BadParameters, "size must be positive");
  Eigen::MatrixXd m = positive_matrix(n, rng);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  scale_to_marginals(m, ones, ones);
  return DenseOperator::from_matrix(FiniteSpace::uniform(n), std::move(m));
}

DenseOperator marginal_scaling_sample(const FiniteSpace& space, std::mt19937_64& rng) {
  Eigen::MatrixXd q = positive_matrix(space.size(), rng);
  scale_to_marginals(q, space.weights(), space.weights());
  Eigen::MatrixXd p = space.weights().cwiseInverse().asDiagonal() * q;
  return DenseOperator::from_matrix(space, std::move(p), 1e-11);
}

DenseOperator birkhoff_mixture(std::size_t n, std::size_t terms, std::mt19937_64& rng) {
  if (n == 0 || terms == 0) throw Error(ErrorCode::BadParameters, "size and term count must be positive");
  std::vector<double> w(terms);
  double total = 0.0;
  for (double& x : w) total += (x = 0.2 + unit_uniform(rng));
  const auto k = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t t = 0; t < terms; ++t) {
    const auto perm = random_permutation(n, rng);
    for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i])) += w[t] / total;
  }
  return DenseOperator::from_matrix(FiniteSpace::uniform(n), std::move(p));
}

std::vector<DenseOperator> test_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<DenseOperator> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 2 + rng() % 11;
    switch (i % 5) {
      case 0: out.push_back(sinkhorn_sample(n, rng)); break;
      case 1: out.push_back(birkhoff_mixture(n, 1 + rng() % 3, rng)); break;
      case 2: {
        const auto perm = random_permutation(n, rng);
        out.push_back(koopman_from_map(FiniteSpace::uniform(n), perm));
        break;
      }
      case 3: {
        const std::size_t blocks = 2 + rng() % 4;
        out.push_back(block_cycle(blocks, 1 + rng() % 3, rng));
        break;
      }
      default: {
        Eigen::VectorXd w(static_cast<Eigen::Index>(n));
        for (Eigen::Index x = 0; x < w.size(); ++x) w[x] = 0.1 + unit_uniform(rng);
        w /= w.sum();
        // Renormalizing once more pins the total within a few ulps of one.
        w /= w.sum();
        out.push_back(marginal_scaling_sample(FiniteSpace::make(w), rng));
        break;
      }
    }
  }
  return out;
}

}  // namespace dsent
