#include "dsent/shift.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "dsent/error.hpp"
#include "numeric_util.hpp"

namespace dsent {

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > limit / base) {
      throw Error(ErrorCode::CellBudgetExceeded,
                  std::to_string(base) + "^" + std::to_string(exp) + " points exceed the budget of " +
                      std::to_string(limit));
    }
    out *= base;
  }
  return out;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

WindowFunction::WindowFunction(std::size_t grid, std::size_t first, std::size_t width,
                               std::vector<double> values)
    : grid_(grid), first_(first), width_(width), values_(std::move(values)) {
  if (grid == 0) throw Error(ErrorCode::BadParameters, "grid size must be positive");
  if (first == 0) throw Error(ErrorCode::BadParameters, "coordinates are numbered from 1");
  if (width == 0) throw Error(ErrorCode::BadParameters, "window must be non-empty");
  if (values_.size() != checked_pow(grid, width, std::numeric_limits<std::size_t>::max() / 2)) {
    throw Error(ErrorCode::DimensionMismatch,
                "window of width " + std::to_string(width) + " on grid " + std::to_string(grid) +
                    " needs " + std::to_string(ipow(grid, width)) + " values, got " +
                    std::to_string(values_.size()));
  }
}

WindowFunction WindowFunction::coordinate(std::size_t grid, std::size_t k, std::vector<double> g) {
  return WindowFunction(grid, k, 1, std::move(g));
}

WindowFunction WindowFunction::product(std::size_t grid, std::size_t first,
                                       const std::vector<std::vector<double>>& factors) {
  if (factors.empty()) throw Error(ErrorCode::BadParameters, "product needs a factor");
  const std::size_t width = factors.size();
  const std::size_t total = ipow(grid, width);
  std::vector<double> values(total, 1.0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (std::size_t j = 0; j < width; ++j) {
      if (factors[j].size() != grid) {
        throw Error(ErrorCode::DimensionMismatch, "factor has wrong grid size");
      }
      values[i] *= factors[j][rest % grid];
      rest /= grid;
    }
  }
  return WindowFunction(grid, first, width, std::move(values));
}

WindowFunction WindowFunction::coordinate_indicator(std::size_t grid, std::size_t k,
                                                    std::size_t atom) {
  if (atom >= grid) throw Error(ErrorCode::BadParameters, "atom outside the grid");
  std::vector<double> g(grid, 0.0);
  g[atom] = 1.0;
  return coordinate(grid, k, std::move(g));
}

double WindowFunction::mean() const {
  detail::CompensatedSum sum;
  for (double v : values_) sum.add(v);
  return sum.value() / static_cast<double>(values_.size());
}

double WindowFunction::l2_norm() const {
  detail::CompensatedSum sum;
  for (double v : values_) sum.add(v * v);
  return std::sqrt(sum.value() / static_cast<double>(values_.size()));
}

bool WindowFunction::in_unit_range() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

WindowFunction WindowFunction::translated(std::size_t offset) const {
  return WindowFunction(grid_, first_ + offset, width_, values_);
}

WindowFunction WindowFunction::minus_constant(double c) const {
  std::vector<double> v = values_;
  for (double& x : v) x -= c;
  return WindowFunction(grid_, first_, width_, std::move(v));
}

MaterializedCollection materialize(std::span<const WindowFunction> functions,
                                   std::size_t max_points) {
  if (functions.empty()) throw Error(ErrorCode::BadParameters, "nothing to materialize");
  const std::size_t grid = functions.front().grid();
  std::vector<std::size_t> coords;
  for (const auto& f : functions) {
    if (f.grid() != grid) throw Error(ErrorCode::BadParameters, "window functions on different grids");
    for (std::size_t c = f.first(); c <= f.last(); ++c) coords.push_back(c);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  const std::size_t points = checked_pow(grid, coords.size(), max_points);
  std::vector<std::size_t> stride(coords.size());
  for (std::size_t p = 0; p < coords.size(); ++p) stride[p] = ipow(grid, p);

  std::vector<Eigen::VectorXd> out;
  out.reserve(functions.size());
  for (const auto& f : functions) {
    // Position of each of f's coordinates inside the materialized point index.
    std::vector<std::size_t> positions(f.width());
    for (std::size_t j = 0; j < f.width(); ++j) {
      positions[j] = static_cast<std::size_t>(
          std::lower_bound(coords.begin(), coords.end(), f.first() + j) - coords.begin());
    }
    Eigen::VectorXd values(static_cast<Eigen::Index>(points));
    for (std::size_t point = 0; point < points; ++point) {
      std::size_t index = 0;
      std::size_t scale = 1;
      for (std::size_t j = 0; j < f.width(); ++j) {
        index += ((point / stride[positions[j]]) % grid) * scale;
        scale *= grid;
      }
      values[static_cast<Eigen::Index>(point)] = f.values()[index];
    }
    out.push_back(std::move(values));
  }
  return MaterializedCollection{std::move(coords), FiniteSpace::uniform(points), std::move(out)};
}

double l1_distance(const WindowFunction& f, const WindowFunction& g) {
  const std::vector<WindowFunction> pair{f, g};
  const auto m = materialize(pair);
  return m.space.l1_norm(m.functions[0] - m.functions[1]);
}

double l2_distance(const WindowFunction& f, const WindowFunction& g) {
  const std::vector<WindowFunction> pair{f, g};
  const auto m = materialize(pair);
  return m.space.l2_norm(m.functions[0] - m.functions[1]);
}

WindowFunction average_coordinate(const WindowFunction& f, std::size_t n) {
  if (n < f.first() || n > f.last()) return f;
  const std::size_t grid = f.grid();
  const std::size_t stride = ipow(grid, n - f.first());
  const double keep = static_cast<double>(n - 1) / static_cast<double>(n);
  const double spread = 1.0 / static_cast<double>(n);
  std::vector<double> values = f.values();
  for (std::size_t base = 0; base < values.size(); ++base) {
    if ((base / stride) % grid != 0) continue;
    double mean = 0.0;
    for (std::size_t a = 0; a < grid; ++a) mean += values[base + a * stride];
    mean /= static_cast<double>(grid);
    for (std::size_t a = 0; a < grid; ++a) {
      double& v = values[base + a * stride];
      v = keep * v + spread * mean;
    }
  }
  return WindowFunction(grid, f.first(), f.width(), std::move(values));
}

ShiftOperator ShiftOperator::averaged(std::size_t grid, std::size_t max_coordinate) {
  if (grid == 0) throw Error(ErrorCode::BadParameters, "grid size must be positive");
  return ShiftOperator(Kind::Averaged, grid, max_coordinate);
}

ShiftOperator ShiftOperator::koopman(std::size_t grid, std::size_t max_coordinate) {
  if (grid == 0) throw Error(ErrorCode::BadParameters, "grid size must be positive");
  return ShiftOperator(Kind::Koopman, grid, max_coordinate);
}

WindowFunction ShiftOperator::apply(const WindowFunction& f) const {
  return apply_power(f, 1);
}

WindowFunction ShiftOperator::apply_power(const WindowFunction& f, std::uint64_t n) const {
  if (f.grid() != grid_) throw Error(ErrorCode::BadParameters, "window function on another grid");
  if (n > max_coordinate_ || f.last() + n > max_coordinate_) {
    throw Error(ErrorCode::WindowOverflow, "iterate would reach coordinate " +
                                               std::to_string(f.last() + n) + " > " +
                                               std::to_string(max_coordinate_));
  }
  if (kind_ == Kind::Koopman) return f.translated(static_cast<std::size_t>(n));
  WindowFunction g = f;
  for (std::uint64_t step = 0; step < n; ++step) {
    for (std::size_t c = g.first(); c <= g.last(); ++c) g = average_coordinate(g, c);
    g = g.translated(1);
  }
  return g;
}

double min_eigen_residual(const ShiftOperator& t, std::size_t window, double min_modulus,
                          double step) {
  using Complex = std::complex<double>;
  const std::size_t grid = t.grid();
  const std::size_t d = ipow(grid, window);
  if (d < 2) return std::numeric_limits<double>::infinity();

  // Euclidean-orthonormal basis of the complement of constants in R^d; scaled
  // by sqrt(d) it is orthonormal in L2 of the uniform product measure.
  Eigen::MatrixXd seed = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                   static_cast<Eigen::Index>(d));
  seed.col(0).setOnes();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd basis = std::sqrt(static_cast<double>(d)) *
                                q.rightCols(static_cast<Eigen::Index>(d - 1));

  const auto k = basis.cols();
  Eigen::MatrixXd e_mat;
  Eigen::MatrixXd f_mat;
  for (Eigen::Index col = 0; col < k; ++col) {
    std::vector<double> v(basis.col(col).data(), basis.col(col).data() + d);
    const WindowFunction f(grid, 1, window, std::move(v));
    const WindowFunction tf = t.apply(f);
    const std::vector<WindowFunction> pair{f, tf};
    const auto m = materialize(pair);
    const double scale = std::sqrt(m.space.weight(0));
    if (col == 0) {
      e_mat.resize(m.functions[0].size(), k);
      f_mat.resize(m.functions[0].size(), k);
    }
    e_mat.col(col) = scale * m.functions[0];
    f_mat.col(col) = scale * m.functions[1];
  }

  // |(F - lambda E) c|^2 = c^* G(lambda) c with E^T E = I.
  const Eigen::MatrixXcd ff = (f_mat.transpose() * f_mat).cast<Complex>();
  const Eigen::MatrixXcd fe = (f_mat.transpose() * e_mat).cast<Complex>();
  const Eigen::MatrixXcd ef = fe.adjoint();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);

  // T is an L2 contraction, so |lambda| >= 1 + b forces a residual >= b.
  constexpr double kOuter = 1.25;
  double best = kOuter - 1.0;
  const auto steps = static_cast<int>(std::ceil((kOuter + step) / step));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (int i = -steps; i <= steps; ++i) {
    for (int j = -steps; j <= steps; ++j) {
      const Complex lambda(i * step, j * step);
      const double modulus = std::abs(lambda);
      if (modulus < min_modulus - step || modulus > kOuter + step) continue;
      const Eigen::MatrixXcd g = ff - lambda * fe - std::conj(lambda) * ef + std::norm(lambda) * id;
      solver.compute(g, Eigen::EigenvaluesOnly);
      const double sigma = std::sqrt(std::max(0.0, solver.eigenvalues()[0]));
      best = std::min(best, sigma - step / std::sqrt(2.0));
    }
  }
  return best;
}

}  // namespace dsent
