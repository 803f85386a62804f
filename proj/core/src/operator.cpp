#include "dsent/operator.hpp"

#include <cmath>
#include <string>

#include "dsent/error.hpp"

namespace dsent {

void validate_doubly_stochastic(const FiniteSpace& space, const Eigen::MatrixXd& kernel,
                                double tolerance) {
  const auto n = static_cast<Eigen::Index>(space.size());
  if (kernel.rows() != n || kernel.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "kernel is " + std::to_string(kernel.rows()) + "x" +
                    std::to_string(kernel.cols()) + ", space has " + std::to_string(n) +
                    " points");
  }
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      if (!(kernel(x, y) >= 0.0) || !std::isfinite(kernel(x, y))) {
        throw Error(ErrorCode::NegativeEntry, "P[" + std::to_string(x) + "][" +
                                                  std::to_string(y) + "] = " +
                                                  std::to_string(kernel(x, y)));
      }
    }
  }
  for (Eigen::Index x = 0; x < n; ++x) {
    const double mass = kernel.row(x).sum();
    if (std::abs(mass - 1.0) > tolerance) {
      throw Error(ErrorCode::RowMassError,
                  "row " + std::to_string(x) + " sums to " + std::to_string(mass));
    }
  }
  const Eigen::RowVectorXd pushed = space.weights().transpose() * kernel;
  for (Eigen::Index y = 0; y < n; ++y) {
    if (std::abs(pushed[y] - space.weights()[y]) > tolerance) {
      throw Error(ErrorCode::StationarityError,
                  "(mu^T P)[" + std::to_string(y) + "] = " + std::to_string(pushed[y]) +
                      " but mu = " + std::to_string(space.weights()[y]));
    }
  }
}

DenseOperator DenseOperator::from_matrix(FiniteSpace space, Eigen::MatrixXd kernel,
                                         double tolerance) {
  validate_doubly_stochastic(space, kernel, tolerance);
  return DenseOperator(std::move(space), std::move(kernel));
}

Eigen::VectorXd DenseOperator::apply(const Eigen::VectorXd& f) const {
  if (f.size() != kernel_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "function has " + std::to_string(f.size()) +
                                                  " values, operator acts on " +
                                                  std::to_string(kernel_.cols()));
  }
  return kernel_ * f;
}

Eigen::MatrixXd DenseOperator::power_matrix(std::uint64_t n) const {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(kernel_.rows(), kernel_.cols());
  Eigen::MatrixXd base = kernel_;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

Eigen::VectorXd DenseOperator::apply_power(const Eigen::VectorXd& f, std::uint64_t n) const {
  constexpr std::uint64_t kDirectLimit = 64;
  if (n <= kDirectLimit) {
    Eigen::VectorXd g = f;
    for (std::uint64_t k = 0; k < n; ++k) g = apply(g);
    return g;
  }
  if (f.size() != kernel_.cols()) return apply(f);  // throws
  return power_matrix(n) * f;
}

Collection DenseOperator::apply(const Collection& f) const {
  require_same_space(space_, f.space());
  std::vector<Eigen::VectorXd> out;
  out.reserve(f.size());
  for (const auto& g : f.functions()) out.push_back(apply(g).cwiseMax(0.0).cwiseMin(1.0));
  return Collection(space_, std::move(out));
}

DenseOperator koopman_from_map(const FiniteSpace& space, std::span<const std::size_t> phi) {
  const std::size_t n = space.size();
  if (phi.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "map has " + std::to_string(phi.size()) +
                                                  " entries, space has " + std::to_string(n));
  }
  Eigen::VectorXd pushforward = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(n));
  for (std::size_t x = 0; x < n; ++x) {
    if (phi[x] >= n) {
      throw Error(ErrorCode::BadParameters, "map sends " + std::to_string(x) + " outside the space");
    }
    const auto y = static_cast<Eigen::Index>(phi[x]);
    kernel(static_cast<Eigen::Index>(x), y) = 1.0;
    pushforward[y] += space.weight(x);
  }
  for (Eigen::Index y = 0; y < static_cast<Eigen::Index>(n); ++y) {
    if (std::abs(pushforward[y] - space.weights()[y]) > kMassTolerance) {
      throw Error(ErrorCode::NotInvariant, "pushforward of mu at " + std::to_string(y) + " is " +
                                               std::to_string(pushforward[y]));
    }
  }
  return DenseOperator::from_matrix(space, std::move(kernel));
}

DenseOperator mean_projection(const FiniteSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd kernel = Eigen::VectorXd::Ones(n) * space.weights().transpose();
  return DenseOperator::from_matrix(space, std::move(kernel));
}

DenseOperator convex_combination(double mix_alpha, const DenseOperator& t, const DenseOperator& u) {
  require_same_space(t.space(), u.space());
  if (!(mix_alpha >= 0.0 && mix_alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaRange, "mixing weight " + std::to_string(mix_alpha));
  }
  if (mix_alpha == 0.0) return t;
  if (mix_alpha == 1.0) return u;
  return DenseOperator::from_matrix(t.space(),
                                    (1.0 - mix_alpha) * t.matrix() + mix_alpha * u.matrix());
}

double l1_operator_norm(const FiniteSpace& space, const Eigen::MatrixXd& a) {
  const Eigen::RowVectorXd weighted = space.weights().transpose() * a.cwiseAbs();
  return weighted.cwiseQuotient(space.weights().transpose()).maxCoeff();
}

DenseOperator cyclic_permutation(std::size_t q, std::size_t step) {
  if (q == 0) throw Error(ErrorCode::BadParameters, "cycle length must be positive");
  std::vector<std::size_t> phi(q);
  for (std::size_t z = 0; z < q; ++z) phi[z] = (z + step) % q;
  return koopman_from_map(FiniteSpace::uniform(q), phi);
}

namespace {

bool in_upper_half(std::size_t z, std::size_t q) { return 2 * z < q; }

}  // namespace

std::vector<std::vector<std::size_t>> annulus_fibers(std::size_t q, std::size_t m,
                                                     AnnulusVariant variant) {
  if (q == 0 || m == 0) throw Error(ErrorCode::BadParameters, "annulus needs q >= 1 and m >= 1");
  std::vector<std::vector<std::size_t>> fibers(q);
  std::size_t next = 0;
  for (std::size_t z = 0; z < q; ++z) {
    const std::size_t count =
        (variant == AnnulusVariant::Plain || in_upper_half(z, q)) ? m : std::size_t{1};
    for (std::size_t x = 0; x < count; ++x) fibers[z].push_back(next++);
  }
  return fibers;
}

DenseOperator annulus_operator(std::size_t q, std::size_t m, std::size_t steps,
                               AnnulusVariant variant) {
  const auto fibers = annulus_fibers(q, m, variant);
  std::size_t n = 0;
  for (const auto& fiber : fibers) n += fiber.size();

  Eigen::VectorXd weights(static_cast<Eigen::Index>(n));
  for (const auto& fiber : fibers) {
    // Each fiber carries 1/q; spread uniformly over its points.
    for (auto point : fiber) {
      weights[static_cast<Eigen::Index>(point)] = 1.0 / static_cast<double>(q * fiber.size());
    }
  }

  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(n));
  for (std::size_t z = 0; z < q; ++z) {
    const auto& target = fibers[(z + steps) % q];
    for (auto point : fibers[z]) {
      // Plain: average over the target fiber. Modified: the same when the
      // rotated position lies in the half circle N, evaluation at fiber
      // point 0 otherwise; that fiber has exactly one point.
      for (auto y : target) {
        kernel(static_cast<Eigen::Index>(point), static_cast<Eigen::Index>(y)) =
            1.0 / static_cast<double>(target.size());
      }
    }
  }
  return DenseOperator::from_matrix(FiniteSpace::make(weights), std::move(kernel));
}

DenseOperator contraction_rotation_operator(std::size_t q, std::size_t steps) {
  const DenseOperator rotation = cyclic_permutation(q, steps % std::max<std::size_t>(q, 1));
  return convex_combination(0.5, rotation, mean_projection(rotation.space()));
}

}  // namespace dsent
