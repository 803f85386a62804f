#pragma once

// Random doubly stochastic operators for studies and test corpora. All
// draws come from one caller-owned mt19937_64; no standard distributions
// are used, so streams are identical across standard libraries.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "dsent/operator.hpp"

namespace dsent {

/// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng);

/// Uniform random permutation (Fisher-Yates).
std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng);

/// Alternating row/column scaling of a positive random matrix until both
/// deviations are below 1e-12; uniform mu. Throws ScalingNotConverged.
DenseOperator sinkhorn_sample(std::size_t n, std::mt19937_64& rng);

/// Experimental: scales a positive random Q to row and column marginals mu,
/// then P = diag(mu)^-1 Q.
DenseOperator marginal_scaling_sample(const FiniteSpace& space, std::mt19937_64& rng);

/// Convex combination of `terms` random permutation matrices, uniform mu.
DenseOperator birkhoff_mixture(std::size_t n, std::size_t terms, std::mt19937_64& rng);

/// Mixed corpus of sizes 2..12: scaled positive matrices, sparse permutation
/// mixtures, permutations, cyclic block averages and non-uniform mu.
std::vector<DenseOperator> test_corpus(std::size_t count, std::uint64_t seed);

}  // namespace dsent
