#include "dsent/entropy.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "dsent/partition.hpp"

namespace dsent {

double EntropyTrace::final_slope() const { return rows.empty() ? 0.0 : rows.back().h_over_n; }

double EntropyTrace::limsup_surrogate() const {
  if (rows.empty()) return 0.0;
  const std::size_t window = (rows.size() + 2) / 3;
  double best = 0.0;
  for (std::size_t i = rows.size() - window; i < rows.size(); ++i) {
    best = std::max(best, rows[i].h_over_n);
  }
  return best;
}

EntropyTrace EntropyTrace::in_base(double base) const {
  EntropyTrace out = *this;
  const double scale = 1.0 / std::log(base);
  for (auto& row : out.rows) {
    row.h *= scale;
    row.h_over_n *= scale;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sequences

SequenceSpec SequenceSpec::explicit_terms(std::vector<std::uint64_t> terms) {
  if (terms.empty()) throw Error(ErrorCode::BadSequence, "sequence is empty");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] == 0) throw Error(ErrorCode::BadSequence, "terms must be positive");
    if (i > 0 && terms[i] <= terms[i - 1]) {
      throw Error(ErrorCode::BadSequence, "sequence is not strictly increasing at position " +
                                              std::to_string(i));
    }
  }
  return SequenceSpec(Kind::Explicit, 1, std::move(terms));
}

SequenceSpec SequenceSpec::powers_of_two() { return SequenceSpec(Kind::PowersOfTwo, 1, {}); }

SequenceSpec SequenceSpec::arithmetic(std::uint64_t step) {
  if (step == 0) throw Error(ErrorCode::BadSequence, "arithmetic step must be positive");
  return SequenceSpec(Kind::Arithmetic, step, {});
}

SequenceSpec SequenceSpec::primes() { return SequenceSpec(Kind::Primes, 1, {}); }

namespace {

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error(ErrorCode::BadSequence, "not a positive integer: '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

SequenceSpec SequenceSpec::parse(std::string_view text) {
  text = trim(text);
  if (text == "powers_of_two") return powers_of_two();
  if (text == "primes") return primes();
  constexpr std::string_view kArith = "arithmetic:";
  if (text.substr(0, kArith.size()) == kArith) return arithmetic(parse_u64(text.substr(kArith.size())));
  std::vector<std::uint64_t> terms;
  while (!text.empty()) {
    const auto comma = text.find(',');
    terms.push_back(parse_u64(trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return explicit_terms(std::move(terms));
}

std::vector<std::uint64_t> SequenceSpec::terms(std::size_t n) const {
  std::vector<std::uint64_t> out;
  out.reserve(n);
  switch (kind_) {
    case Kind::Explicit:
      if (n > explicit_.size()) {
        throw Error(ErrorCode::BadSequence, "explicit sequence has only " +
                                                std::to_string(explicit_.size()) + " terms");
      }
      out.assign(explicit_.begin(), explicit_.begin() + static_cast<std::ptrdiff_t>(n));
      break;
    case Kind::PowersOfTwo:
      if (n > 63) throw Error(ErrorCode::BadSequence, "2^" + std::to_string(n - 1) + " overflows");
      for (std::size_t k = 0; k < n; ++k) out.push_back(std::uint64_t{1} << k);
      break;
    case Kind::Arithmetic:
      for (std::size_t k = 1; k <= n; ++k) {
        if (step_ > std::numeric_limits<std::uint64_t>::max() / k) {
          throw Error(ErrorCode::BadSequence, "arithmetic sequence overflows");
        }
        out.push_back(step_ * k);
      }
      break;
    case Kind::Primes:
      for (std::uint64_t candidate = 2; out.size() < n; ++candidate) {
        bool prime = true;
        for (auto p : out) {
          if (p * p > candidate) break;
          if (candidate % p == 0) {
            prime = false;
            break;
          }
        }
        if (prime) out.push_back(candidate);
      }
      break;
  }
  return out;
}

std::string SequenceSpec::name() const {
  switch (kind_) {
    case Kind::PowersOfTwo: return "powers_of_two";
    case Kind::Primes: return "primes";
    case Kind::Arithmetic: return "arithmetic:" + std::to_string(step_);
    case Kind::Explicit: {
      std::string s;
      for (std::size_t i = 0; i < explicit_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(explicit_[i]);
      }
      return s;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Traces

namespace {

std::vector<std::uint64_t> dynamic_times(std::size_t horizon) {
  std::vector<std::uint64_t> t(horizon);
  for (std::size_t k = 0; k < horizon; ++k) t[k] = k;
  return t;
}

void append_row(EntropyTrace& trace, const CellPartition& cells, std::size_t budget) {
  const std::size_t n = trace.rows.size() + 1;
  if (cells.cells.size() > budget) {
    throw CellBudgetError("row " + std::to_string(n) + " needs " +
                              std::to_string(cells.cells.size()) + " cells, budget is " +
                              std::to_string(budget),
                          trace);
  }
  const double h = partition_entropy(cells);
  trace.rows.push_back({n, h, h / static_cast<double>(n)});
}

EntropyTrace dense_trace(const DenseOperator& t, const Collection& f,
                         const std::vector<std::uint64_t>& times, const TraceOptions& options) {
  require_same_space(t.space(), f.space());
  if (times.empty()) throw Error(ErrorCode::BadParameters, "horizon must be at least 1");
  EntropyTrace trace;
  trace.collection_size = f.size();
  trace.horizon = times.size();

  std::vector<Eigen::VectorXd> current = f.functions();
  std::vector<Eigen::VectorXd> joined;
  std::uint64_t now = 0;
  for (auto target : times) {
    const std::uint64_t gap = target - now;
    if (gap > 0) {
      if (gap > 64) {
        const Eigen::MatrixXd step = t.power_matrix(gap);
        for (auto& g : current) g = step * g;
      } else {
        for (auto& g : current) g = t.apply_power(g, gap);
      }
      for (auto& g : current) g = g.cwiseMax(0.0).cwiseMin(1.0);
      now = target;
    }
    joined.insert(joined.end(), current.begin(), current.end());
    append_row(trace, cell_measures(Collection(f.space(), joined)), options.cell_budget);
  }
  return trace;
}

EntropyTrace shift_trace(const ShiftOperator& t, std::span<const WindowFunction> f,
                         const std::vector<std::uint64_t>& times, const TraceOptions& options) {
  if (f.empty()) throw Error(ErrorCode::BadParameters, "collection is empty");
  if (times.empty()) throw Error(ErrorCode::BadParameters, "horizon must be at least 1");
  for (const auto& g : f) {
    if (!g.in_unit_range()) throw Error(ErrorCode::ValueOutOfRange, "window function leaves [0,1]");
  }
  EntropyTrace trace;
  trace.collection_size = f.size();
  trace.horizon = times.size();

  std::vector<WindowFunction> current(f.begin(), f.end());
  std::vector<WindowFunction> joined;
  std::uint64_t now = 0;
  for (auto target : times) {
    const std::uint64_t gap = target - now;
    if (gap > 0) {
      for (auto& g : current) g = t.apply_power(g, gap);
      now = target;
    }
    joined.insert(joined.end(), current.begin(), current.end());
    MaterializedCollection m = [&] {
      try {
        return materialize(joined, options.cell_budget);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::CellBudgetExceeded) throw;
        throw CellBudgetError(e.what(), trace);
      }
    }();
    for (auto& g : m.functions) g = g.cwiseMax(0.0).cwiseMin(1.0);
    append_row(trace, cell_measures(Collection(m.space, std::move(m.functions))),
               options.cell_budget);
  }
  return trace;
}

}  // namespace

EntropyTrace entropy_trace(const DenseOperator& t, const Collection& f, std::size_t horizon,
                           const TraceOptions& options) {
  return dense_trace(t, f, dynamic_times(horizon), options);
}

EntropyTrace entropy_trace(const ShiftOperator& t, std::span<const WindowFunction> f,
                           std::size_t horizon, const TraceOptions& options) {
  return shift_trace(t, f, dynamic_times(horizon), options);
}

EntropyTrace sequence_entropy_trace(const DenseOperator& t, const Collection& f,
                                    const SequenceSpec& seq, std::size_t horizon,
                                    const TraceOptions& options) {
  return dense_trace(t, f, seq.terms(horizon), options);
}

EntropyTrace sequence_entropy_trace(const ShiftOperator& t, std::span<const WindowFunction> f,
                                    const SequenceSpec& seq, std::size_t horizon,
                                    const TraceOptions& options) {
  return shift_trace(t, f, seq.terms(horizon), options);
}

EntropyEstimate estimate_from_trace(EntropyTrace trace, double tol) {
  EntropyEstimate out;
  out.estimate = trace.final_slope();
  const auto& rows = trace.rows;
  if (rows.size() >= 4) {
    out.converged = true;
    for (std::size_t i = rows.size() - 3; i < rows.size(); ++i) {
      if (!(std::abs(rows[i].h_over_n - rows[i - 1].h_over_n) < tol)) out.converged = false;
    }
  }
  out.trace = std::move(trace);
  return out;
}

EntropyEstimate dynamic_entropy_estimate(const DenseOperator& t, const Collection& f,
                                         std::size_t horizon, double tol,
                                         const TraceOptions& options) {
  if (horizon < 4) throw Error(ErrorCode::BadParameters, "estimate needs a horizon of at least 4");
  return estimate_from_trace(entropy_trace(t, f, horizon, options), tol);
}

EntropyEstimate dynamic_entropy_estimate(const ShiftOperator& t, std::span<const WindowFunction> f,
                                         std::size_t horizon, double tol,
                                         const TraceOptions& options) {
  if (horizon < 4) throw Error(ErrorCode::BadParameters, "estimate needs a horizon of at least 4");
  return estimate_from_trace(entropy_trace(t, f, horizon, options), tol);
}

// ---------------------------------------------------------------------------
// Supremum search

namespace {

double score(const EntropyTrace& trace, const SearchOptions& options) {
  return options.sequence ? trace.limsup_surrogate() : trace.final_slope();
}

}  // namespace

SupremumSearch entropy_supremum_search(const DenseOperator& t, const SearchOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(t.size());

  Eigen::EigenSolver<Eigen::MatrixXd> eig(t.matrix());
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "eigensolver failed");
  const Eigen::MatrixXcd vectors = eig.eigenvectors();

  auto random_indicator = [&] {
    Eigen::VectorXd f(n);
    for (Eigen::Index x = 0; x < n; ++x) f[x] = unit(rng) < 0.5 ? 1.0 : 0.0;
    return f;
  };
  auto random_values = [&] {
    Eigen::VectorXd f(n);
    for (Eigen::Index x = 0; x < n; ++x) f[x] = unit(rng);
    return f;
  };

  SupremumSearch out;
  for (std::size_t c = 0; c < options.budget; ++c) {
    std::vector<Eigen::VectorXd> functions;
    std::string label;
    switch (c % 4) {
      case 0:
        functions = {random_indicator(), random_indicator()};
        label = "indicators";
        break;
      case 1:
        functions = {random_values(), random_values()};
        label = "uniform";
        break;
      case 2:
        functions = {random_values()};
        label = "singleton";
        break;
      default: {
        const auto which = static_cast<Eigen::Index>((c / 4) % static_cast<std::size_t>(n));
        Eigen::VectorXd mag = vectors.col(which).cwiseAbs();
        const double top = mag.maxCoeff();
        functions = {top > 0.0 ? Eigen::VectorXd(mag / top) : Eigen::VectorXd::Zero(n)};
        label = "eigenvector:" + std::to_string(which);
        break;
      }
    }
    const Collection coll(t.space(), std::move(functions));
    const EntropyTrace trace =
        options.sequence
            ? sequence_entropy_trace(t, coll, *options.sequence, options.horizon, options.trace)
            : entropy_trace(t, coll, options.horizon, options.trace);
    const double value = score(trace, options);
    out.candidate_labels.push_back(std::move(label));
    out.candidate_values.push_back(value);
    if (c == 0 || value > out.lower_bound) {
      out.lower_bound = value;
      out.best_candidate = c;
    }
  }
  return out;
}

SupremumSearch entropy_supremum_search(const ShiftOperator& t, const SearchOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t grid = t.grid();

  SupremumSearch out;
  for (std::size_t c = 0; c < options.budget; ++c) {
    std::vector<WindowFunction> functions;
    std::string label;
    if (c == 0) {
      functions.push_back(WindowFunction::coordinate_indicator(grid, 1, grid - 1));
      label = "coordinate_indicator";
    } else if (c % 2 == 1) {
      std::vector<double> g(grid);
      for (auto& v : g) v = unit(rng);
      functions.push_back(WindowFunction::coordinate(grid, 1, std::move(g)));
      label = "coordinate";
    } else {
      std::vector<double> g(grid * grid);
      for (auto& v : g) v = unit(rng);
      functions.emplace_back(grid, 1, 2, std::move(g));
      label = "two_coordinates";
    }
    const EntropyTrace trace =
        options.sequence
            ? sequence_entropy_trace(t, functions, *options.sequence, options.horizon, options.trace)
            : entropy_trace(t, functions, options.horizon, options.trace);
    const double value = score(trace, options);
    out.candidate_labels.push_back(std::move(label));
    out.candidate_values.push_back(value);
    if (c == 0 || value > out.lower_bound) {
      out.lower_bound = value;
      out.best_candidate = c;
    }
  }
  return out;
}

}  // namespace dsent
