#pragma once

// Threshold partitions of X x [0,1] induced by collections, and their entropies.
//
// For f : X -> [0,1] the set A_f = {(x,t) : t <= f(x)} and its complement
// partition X x [0,1]; a collection induces the join of these. A cell is
// labelled by the subset S of functions whose threshold set contains it, and at
// a point x the label S(t) = {f : f(x) >= t} decreases in t, so each point
// contributes at most r+1 cells.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dsent/space.hpp"

namespace dsent {

/// Fixed-width subset of {0, ..., width-1}.
class CellKey {
 public:
  explicit CellKey(std::size_t width = 0);

  void set(std::size_t i);
  bool test(std::size_t i) const;
  std::size_t width() const { return width_; }
  std::size_t count() const;
  std::vector<std::size_t> members() const;
  /// Bit pattern, character i is '1' iff function i is in the subset.
  std::string to_string() const;

  /// Keep only bits in [first, first+len), renumbered from 0.
  CellKey slice(std::size_t first, std::size_t len) const;
  /// This subset followed by `tail` shifted by width().
  CellKey append(const CellKey& tail) const;

  auto operator<=>(const CellKey&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

struct CellPartition {
  std::map<CellKey, double> cells;
  std::size_t source_size = 0;

  double total_mass() const;
};

/// One maximal t-interval (lo, hi] at a point on which the label is constant.
struct ThresholdInterval {
  CellKey key;
  double lo = 0.0;
  double hi = 0.0;
};

/// Label intervals at a single point, from t near 1 downwards. Zero-length
/// intervals (ties, values at 0 or 1) are omitted.
std::vector<ThresholdInterval> point_intervals(const std::vector<double>& values);

/// Cell measures of A_F under mu x Lebesgue. Cells of zero measure are absent.
CellPartition cell_measures(const Collection& f);

/// A_F v A_G assembled by intersecting the per-point interval families of F
/// and G. Keys of G are shifted past those of F, so the result is directly
/// comparable with cell_measures(F.concat(G)). Throws SpaceMismatch.
CellPartition join_partitions(const Collection& f, const Collection& g);

/// Sum cell measures over labels that agree on [first, first+len).
CellPartition marginalize(const CellPartition& p, std::size_t first, std::size_t len);

/// Shannon entropy in nats. Cells below 1e-15 are dropped and their mass moved
/// to the largest cell before summation.
double partition_entropy(const CellPartition& p);

/// H(F) = H(A_F).
double static_entropy(const Collection& f);

/// H(F | G) = H(F v G) - H(G), clamped to 0 when within 1e-12 below it.
double conditional_entropy(const Collection& f, const Collection& g);

/// CSV `cell_key,measure` for debugging.
void write_cells_csv(std::ostream& out, const CellPartition& p);

}  // namespace dsent
