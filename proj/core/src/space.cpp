#include "dsent/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dsent/error.hpp"

namespace dsent {

FiniteSpace FiniteSpace::make(std::span<const double> weights) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) w[static_cast<Eigen::Index>(i)] = weights[i];
  return make(w);
}

FiniteSpace FiniteSpace::make(const Eigen::VectorXd& weights) {
  if (weights.size() == 0) {
    throw Error(ErrorCode::NonPositiveWeight, "space needs at least one point");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorCode::NonPositiveWeight,
                  "weight " + std::to_string(i) + " is " + std::to_string(weights[i]));
    }
  }
  const double total = weights.sum();
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::MassNotOne, "weights sum to " + std::to_string(total));
  }
  return FiniteSpace(weights);
}

FiniteSpace FiniteSpace::uniform(std::size_t points) {
  if (points == 0) throw Error(ErrorCode::NonPositiveWeight, "space needs at least one point");
  return make(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(points),
                                        1.0 / static_cast<double>(points)));
}

double FiniteSpace::integrate(const Eigen::VectorXd& f) const { return weights_.dot(f); }

double FiniteSpace::l1_norm(const Eigen::VectorXd& f) const {
  return weights_.dot(f.cwiseAbs());
}

double FiniteSpace::l2_norm(const Eigen::VectorXd& f) const {
  return std::sqrt(weights_.dot(f.cwiseAbs2()));
}

double FiniteSpace::inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
  return weights_.dot(f.cwiseProduct(g));
}

void require_same_space(const FiniteSpace& a, const FiniteSpace& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::SpaceMismatch, "operands live on different spaces");
  }
}

bool in_unit_range(const Eigen::VectorXd& f) {
  return (f.array() >= 0.0).all() && (f.array() <= 1.0).all();
}

Collection::Collection(FiniteSpace space, std::vector<Eigen::VectorXd> functions)
    : space_(std::move(space)), functions_(std::move(functions)) {
  if (functions_.empty()) throw Error(ErrorCode::BadParameters, "collection is empty");
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    if (static_cast<std::size_t>(functions_[i].size()) != space_.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "function " + std::to_string(i) + " has " +
                      std::to_string(functions_[i].size()) + " values, space has " +
                      std::to_string(space_.size()) + " points");
    }
    if (!in_unit_range(functions_[i])) {
      throw Error(ErrorCode::ValueOutOfRange,
                  "function " + std::to_string(i) + " leaves [0,1]");
    }
  }
}

Collection Collection::concat(const Collection& other) const {
  require_same_space(space_, other.space_);
  std::vector<Eigen::VectorXd> all = functions_;
  all.insert(all.end(), other.functions_.begin(), other.functions_.end());
  return Collection(space_, std::move(all));
}

namespace {

// cost(i, j) = int |f_i - g_j| dmu, with both sides padded to r by zeros.
Eigen::MatrixXd padded_costs(const Collection& f, const Collection& g) {
  require_same_space(f.space(), g.space());
  const std::size_t r = std::max(f.size(), g.size());
  const auto n = static_cast<Eigen::Index>(f.space().size());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  auto at = [&](const Collection& c, std::size_t i) -> const Eigen::VectorXd& {
    return i < c.size() ? c[i] : zero;
  };
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          f.space().l1_norm(at(f, i) - at(g, j));
    }
  }
  return cost;
}

double exhaustive_assignment(const Eigen::MatrixXd& cost) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(cost.rows()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      worst = std::max(worst, cost(static_cast<Eigen::Index>(i), perm[i]));
      if (worst >= best) break;
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Kuhn's augmenting paths on the graph {(i,j) : cost(i,j) <= threshold}.
bool has_perfect_matching(const Eigen::MatrixXd& cost, double threshold) {
  const auto r = static_cast<std::size_t>(cost.rows());
  std::vector<int> match_of_col(r, -1);
  std::vector<char> seen;
  auto augment = [&](auto&& self, std::size_t row) -> bool {
    for (std::size_t col = 0; col < r; ++col) {
      if (seen[col] || cost(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) > threshold) {
        continue;
      }
      seen[col] = 1;
      if (match_of_col[col] < 0 || self(self, static_cast<std::size_t>(match_of_col[col]))) {
        match_of_col[col] = static_cast<int>(row);
        return true;
      }
    }
    return false;
  };
  for (std::size_t row = 0; row < r; ++row) {
    seen.assign(r, 0);
    if (!augment(augment, row)) return false;
  }
  return true;
}

}  // namespace

double bottleneck_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() == 0) return 0.0;
  std::vector<double> values(cost.data(), cost.data() + cost.size());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  // The optimum is always one of the entries; find the smallest feasible one.
  std::size_t lo = 0;
  std::size_t hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (has_perfect_matching(cost, values[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return values[lo];
}

double collection_distance_exhaustive(const Collection& f, const Collection& g) {
  return exhaustive_assignment(padded_costs(f, g));
}

double collection_distance_bottleneck(const Collection& f, const Collection& g) {
  return bottleneck_assignment(padded_costs(f, g));
}

double collection_distance(const Collection& f, const Collection& g) {
  const Eigen::MatrixXd cost = padded_costs(f, g);
  return cost.rows() <= 8 ? exhaustive_assignment(cost) : bottleneck_assignment(cost);
}

}  // namespace dsent
