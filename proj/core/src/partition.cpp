#include "dsent/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>

#include "dsent/error.hpp"
#include "numeric_util.hpp"

namespace dsent {

CellKey::CellKey(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

void CellKey::set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

bool CellKey::test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

std::size_t CellKey::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<std::size_t> CellKey::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < width_; ++i) {
    if (test(i)) out.push_back(i);
  }
  return out;
}

std::string CellKey::to_string() const {
  std::string s(width_, '0');
  for (std::size_t i = 0; i < width_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

CellKey CellKey::slice(std::size_t first, std::size_t len) const {
  CellKey out(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (test(first + i)) out.set(i);
  }
  return out;
}

CellKey CellKey::append(const CellKey& tail) const {
  CellKey out(width_ + tail.width_);
  for (std::size_t i = 0; i < width_; ++i) {
    if (test(i)) out.set(i);
  }
  for (std::size_t i = 0; i < tail.width_; ++i) {
    if (tail.test(i)) out.set(width_ + i);
  }
  return out;
}

double CellPartition::total_mass() const {
  detail::CompensatedSum sum;
  for (const auto& [key, m] : cells) sum.add(m);
  return sum.value();
}

std::vector<ThresholdInterval> point_intervals(const std::vector<double>& values) {
  const std::size_t r = values.size();
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  std::vector<ThresholdInterval> out;
  out.reserve(r + 1);
  CellKey key(r);
  double hi = 1.0;
  std::size_t i = 0;
  while (true) {
    const double lo = i < r ? values[order[i]] : 0.0;
    if (hi > lo) out.push_back({key, lo, hi});
    if (i == r) break;
    // Functions tied at this value enter the label together.
    const double level = values[order[i]];
    while (i < r && values[order[i]] == level) key.set(order[i++]);
    hi = std::min(hi, level);
  }
  return out;
}

namespace {

std::vector<double> values_at(const Collection& f, Eigen::Index x) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = f[i][x];
  return v;
}

void check_cell_bound(const CellPartition& p, std::size_t points) {
  if (p.cells.size() > points * (p.source_size + 1)) {
    throw std::logic_error("threshold partition exceeds points*(r+1) cells");
  }
}

}  // namespace

CellPartition cell_measures(const Collection& f) {
  CellPartition p;
  p.source_size = f.size();
  const FiniteSpace& space = f.space();
  for (Eigen::Index x = 0; x < static_cast<Eigen::Index>(space.size()); ++x) {
    const double mu = space.weights()[x];
    for (const auto& iv : point_intervals(values_at(f, x))) {
      p.cells[iv.key] += mu * (iv.hi - iv.lo);
    }
  }
  check_cell_bound(p, space.size());
  return p;
}

CellPartition join_partitions(const Collection& f, const Collection& g) {
  require_same_space(f.space(), g.space());
  CellPartition p;
  p.source_size = f.size() + g.size();
  const FiniteSpace& space = f.space();
  for (Eigen::Index x = 0; x < static_cast<Eigen::Index>(space.size()); ++x) {
    const double mu = space.weights()[x];
    const auto left = point_intervals(values_at(f, x));
    const auto right = point_intervals(values_at(g, x));
    // Both families are ordered from the top of [0,1] downwards: merge them.
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < left.size() && j < right.size()) {
      const double hi = std::min(left[i].hi, right[j].hi);
      const double lo = std::max(left[i].lo, right[j].lo);
      if (hi > lo) p.cells[left[i].key.append(right[j].key)] += mu * (hi - lo);
      if (left[i].lo >= right[j].lo) {
        ++i;
      } else {
        ++j;
      }
    }
  }
  check_cell_bound(p, space.size());
  return p;
}

CellPartition marginalize(const CellPartition& p, std::size_t first, std::size_t len) {
  CellPartition out;
  out.source_size = len;
  for (const auto& [key, m] : p.cells) out.cells[key.slice(first, len)] += m;
  return out;
}

double partition_entropy(const CellPartition& p) {
  constexpr double kDropBelow = 1e-15;
  std::vector<double> masses;
  masses.reserve(p.cells.size());
  double dropped = 0.0;
  for (const auto& [key, m] : p.cells) {
    if (m < kDropBelow) {
      dropped += m;
    } else {
      masses.push_back(m);
    }
  }
  if (masses.empty()) return 0.0;
  if (dropped > 0.0) *std::max_element(masses.begin(), masses.end()) += dropped;
  detail::CompensatedSum sum;
  for (double m : masses) sum.add(-m * std::log(m));
  return std::max(0.0, sum.value());
}

double static_entropy(const Collection& f) { return partition_entropy(cell_measures(f)); }

double conditional_entropy(const Collection& f, const Collection& g) {
  const double h = static_entropy(f.concat(g)) - static_entropy(g);
  return (h < 0.0 && h >= -1e-12) ? 0.0 : h;
}

void write_cells_csv(std::ostream& out, const CellPartition& p) {
  out << "cell_key,measure\n";
  const auto old = out.precision(17);
  for (const auto& [key, m] : p.cells) out << key.to_string() << ',' << m << '\n';
  out.precision(old);
}

}  // namespace dsent
