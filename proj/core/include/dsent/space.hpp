#pragma once

// Finite probability spaces, [0,1]-valued observables and collections of them.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dsent {

inline constexpr double kMassTolerance = 1e-12;

/// Finitely many atoms with strictly positive probability weights.
/// Weights are stored exactly as given; they are never renormalized.
class FiniteSpace {
 public:
  /// Throws NonPositiveWeight or MassNotOne.
  static FiniteSpace make(std::span<const double> weights);
  static FiniteSpace make(const Eigen::VectorXd& weights);
  static FiniteSpace uniform(std::size_t points);

  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight(std::size_t x) const { return weights_[static_cast<Eigen::Index>(x)]; }

  /// Integral of f against the weights.
  double integrate(const Eigen::VectorXd& f) const;
  /// L1(mu) norm.
  double l1_norm(const Eigen::VectorXd& f) const;
  /// L2(mu) norm.
  double l2_norm(const Eigen::VectorXd& f) const;
  /// The mu-weighted inner product sum_x mu(x) f(x) g(x).
  double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;

  friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
    return a.weights_.size() == b.weights_.size() && a.weights_ == b.weights_;
  }

 private:
  explicit FiniteSpace(Eigen::VectorXd w) : weights_(std::move(w)) {}
  Eigen::VectorXd weights_;
};

/// Throws SpaceMismatch unless a and b are the same space.
void require_same_space(const FiniteSpace& a, const FiniteSpace& b);

/// True when every entry lies in [0,1].
bool in_unit_range(const Eigen::VectorXd& f);

/// A finite ordered list of [0,1]-valued functions over one space.
/// May be empty only transiently (padding target); constructors require
/// at least one function.
class Collection {
 public:
  /// Throws DimensionMismatch, ValueOutOfRange, BadParameters (empty list).
  Collection(FiniteSpace space, std::vector<Eigen::VectorXd> functions);

  const FiniteSpace& space() const { return space_; }
  const std::vector<Eigen::VectorXd>& functions() const { return functions_; }
  std::size_t size() const { return functions_.size(); }
  const Eigen::VectorXd& operator[](std::size_t i) const { return functions_[i]; }

  /// F v G: F followed by G. Throws SpaceMismatch.
  Collection concat(const Collection& other) const;

 private:
  FiniteSpace space_;
  std::vector<Eigen::VectorXd> functions_;
};

/// Collection distance: the shorter collection is padded with zero functions,
/// then min over permutations pi of max_i int |f_i - g_pi(i)| dmu.
/// Exhaustive for r <= 8, bottleneck assignment above. Throws SpaceMismatch.
double collection_distance(const Collection& f, const Collection& g);

/// Both search strategies, exposed so they can be cross-checked.
double collection_distance_exhaustive(const Collection& f, const Collection& g);
double collection_distance_bottleneck(const Collection& f, const Collection& g);

/// Min over permutations of max_i cost(i, pi(i)) for a square cost matrix,
/// via threshold binary search and bipartite matching.
double bottleneck_assignment(const Eigen::MatrixXd& cost);

}  // namespace dsent
