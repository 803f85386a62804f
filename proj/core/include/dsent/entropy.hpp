#pragma once

// Dynamic and sequence entropy of doubly stochastic operators along finite
// horizons.
//
// Row n of a trace holds H(T^{t_1}F v ... v T^{t_n}F) computed exactly by the
// threshold-partition module; for the dynamic entropy t_k = k - 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsent/error.hpp"
#include "dsent/operator.hpp"
#include "dsent/shift.hpp"
#include "dsent/space.hpp"

namespace dsent {

struct EntropyRow {
  std::size_t n = 0;
  double h = 0.0;
  double h_over_n = 0.0;
};

struct EntropyTrace {
  std::vector<EntropyRow> rows;
  std::size_t collection_size = 0;
  std::size_t horizon = 0;

  /// H_N / N of the last row.
  double final_slope() const;
  /// Running max of H_n/n over the final ceil(N/3) rows.
  double limsup_surrogate() const;
  /// Same trace with entropies expressed in another logarithm base.
  EntropyTrace in_base(double base) const;
};

/// Raised when a join would hold more cells than the configured budget.
class CellBudgetError : public Error {
 public:
  CellBudgetError(const std::string& what, EntropyTrace partial)
      : Error(ErrorCode::CellBudgetExceeded, what), partial_(std::move(partial)) {}
  const EntropyTrace& partial_trace() const { return partial_; }

 private:
  EntropyTrace partial_;
};

struct TraceOptions {
  std::size_t cell_budget = 10'000'000;
};

/// Strictly increasing positive integers t_1 < t_2 < ...
class SequenceSpec {
 public:
  /// Throws BadSequence unless strictly increasing and positive.
  static SequenceSpec explicit_terms(std::vector<std::uint64_t> terms);
  static SequenceSpec powers_of_two();
  /// step, 2 step, 3 step, ...
  static SequenceSpec arithmetic(std::uint64_t step);
  static SequenceSpec primes();
  /// "powers_of_two", "primes", "arithmetic:<step>" or a comma list "1,3,7".
  static SequenceSpec parse(std::string_view text);

  /// First n terms. Throws BadSequence when an explicit list is too short or
  /// a term would overflow.
  std::vector<std::uint64_t> terms(std::size_t n) const;
  std::string name() const;

 private:
  enum class Kind { Explicit, PowersOfTwo, Arithmetic, Primes };
  SequenceSpec(Kind kind, std::uint64_t step, std::vector<std::uint64_t> terms)
      : kind_(kind), step_(step), explicit_(std::move(terms)) {}

  Kind kind_;
  std::uint64_t step_ = 1;
  std::vector<std::uint64_t> explicit_;
};

/// Rows n = 1..N of H(F v TF v ... v T^{n-1}F). Throws BadParameters (N = 0),
/// SpaceMismatch, CellBudgetError.
EntropyTrace entropy_trace(const DenseOperator& t, const Collection& f, std::size_t horizon,
                           const TraceOptions& options = {});
/// Shift backend; members of `f` must take values in [0,1]. Also throws
/// WindowOverflow.
EntropyTrace entropy_trace(const ShiftOperator& t, std::span<const WindowFunction> f,
                           std::size_t horizon, const TraceOptions& options = {});

/// Rows n = 1..N of H(T^{t_1}F v ... v T^{t_n}F).
EntropyTrace sequence_entropy_trace(const DenseOperator& t, const Collection& f,
                                    const SequenceSpec& seq, std::size_t horizon,
                                    const TraceOptions& options = {});
EntropyTrace sequence_entropy_trace(const ShiftOperator& t, std::span<const WindowFunction> f,
                                    const SequenceSpec& seq, std::size_t horizon,
                                    const TraceOptions& options = {});

struct EntropyEstimate {
  double estimate = 0.0;
  bool converged = false;
  EntropyTrace trace;
};

/// estimate = H_N/N; converged when the last three consecutive slope
/// differences are below tol. Requires N >= 4 (BadParameters).
EntropyEstimate dynamic_entropy_estimate(const DenseOperator& t, const Collection& f,
                                         std::size_t horizon, double tol,
                                         const TraceOptions& options = {});
EntropyEstimate dynamic_entropy_estimate(const ShiftOperator& t, std::span<const WindowFunction> f,
                                         std::size_t horizon, double tol,
                                         const TraceOptions& options = {});

/// Reduces a trace to (H_N/N, converged) by the rule above.
EntropyEstimate estimate_from_trace(EntropyTrace trace, double tol);

struct SupremumSearch {
  double lower_bound = 0.0;
  std::size_t best_candidate = 0;
  std::vector<std::string> candidate_labels;
  std::vector<double> candidate_values;
};

struct SearchOptions {
  std::size_t budget = 16;
  std::size_t horizon = 32;
  std::uint64_t seed = 0;
  /// When set, candidates are scored by the limsup surrogate of the sequence
  /// entropy trace along this sequence instead of H_N/N.
  std::optional<SequenceSpec> sequence;
  TraceOptions trace;
};

/// Randomized lower bound on sup_F h(T,F) (or h_A). Candidates cycle through
/// indicators of random sets, uniform random values, point indicators and
/// rescaled eigenvector magnitudes. Deterministic for a fixed seed.
SupremumSearch entropy_supremum_search(const DenseOperator& t, const SearchOptions& options);
/// Shift backend: the first candidate is the indicator of {x_1 = top atom},
/// the rest are random one- and two-coordinate functions.
SupremumSearch entropy_supremum_search(const ShiftOperator& t, const SearchOptions& options);

}  // namespace dsent
