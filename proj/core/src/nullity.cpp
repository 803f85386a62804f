#include "dsent/nullity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dsent/error.hpp"
#include "numeric_util.hpp"

namespace dsent {

namespace {

constexpr double kSeparation = 0.25;
constexpr std::size_t kSeparationHorizon = 10;
constexpr double kClusterTolerance = 1e-8;
constexpr double kIndicatorTolerance = 1e-6;

template <typename Point, typename Distance>
PrecompactnessReport greedy_net(const std::vector<Point>& orbit, double eps, Distance distance) {
  PrecompactnessReport out;
  out.min_pairwise_distance = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> centers;
  for (std::size_t n = 0; n < orbit.size(); ++n) {
    bool covered = false;
    for (std::size_t c : centers) {
      if (distance(orbit[c], orbit[n]) <= eps) {
        covered = true;
        break;
      }
    }
    if (!covered) centers.push_back(n);
    for (std::size_t m = 0; m < n; ++m) {
      out.min_pairwise_distance = std::min(out.min_pairwise_distance, distance(orbit[m], orbit[n]));
    }
    out.net_sizes.push_back(centers.size());
  }
  const std::size_t horizon = orbit.size() - 1;
  const std::size_t tail = (horizon + 2) / 3;
  out.precompact_evidence = true;
  for (std::size_t n = horizon - tail; n < horizon; ++n) {
    if (out.net_sizes[n] != out.net_sizes[horizon]) out.precompact_evidence = false;
  }
  return out;
}

double max_orbit_norm(const FiniteSpace& space, const Eigen::MatrixXd& power, const Eigen::MatrixXd& basis) {
  double out = 0.0;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    out = std::max(out, space.l2_norm(power * basis.col(c)));
  }
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Null: return "null";
    case Verdict::NotNull: return "not_null";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_string(Route r) {
  switch (r) {
    case Route::Spectral: return "spectral";
    case Route::OrbitDecay: return "orbit_decay";
    case Route::OrbitSeparation: return "orbit_separation";
  }
  return "unknown";
}

Eigen::VectorXd conditional_expectation_rev(const SpectralSplit& split, const Eigen::VectorXd& f) {
  if (static_cast<std::size_t>(f.size()) != split.space.size()) {
    throw Error(ErrorCode::SpaceMismatch, "function and split live on different spaces");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
  for (Eigen::Index c = 0; c < split.rev_basis.cols(); ++c) {
    out += split.space.inner(f, split.rev_basis.col(c)) * split.rev_basis.col(c);
  }
  return out;
}

NullityReport nullity_check(const DenseOperator& t, std::size_t horizon, double tol,
                            double eps_spec) {
  const SpectralSplit split = jdlg_decompose(t, eps_spec);
  NullityReport out;
  out.horizon = horizon;
  out.aws_spectral_radius = split.aws_spectral_radius;
  const Eigen::MatrixXd power = t.power_matrix(horizon);
  for (Eigen::Index c = 0; c < split.aws_basis.cols(); ++c) {
    out.final_norms.push_back(t.space().l2_norm(power * split.aws_basis.col(c)));
  }
  if (split.aws_spectral_radius < 1.0 - kSpectralGap) {
    out.verdict = Verdict::Null;
    out.route = Route::Spectral;
    return out;
  }
  out.route = Route::OrbitDecay;
  const bool decayed =
      std::all_of(out.final_norms.begin(), out.final_norms.end(), [tol](double v) { return v < tol; });
  out.verdict = decayed ? Verdict::Null : Verdict::Inconclusive;
  return out;
}

NullityReport nullity_check(const ShiftOperator& t, std::size_t horizon, double tol) {
  NullityReport out;
  out.horizon = horizon;
  out.min_pairwise_distance = std::numeric_limits<double>::infinity();
  out.min_deviation = std::numeric_limits<double>::infinity();
  double separated_distance = std::numeric_limits<double>::infinity();
  double separated_deviation = std::numeric_limits<double>::infinity();
  bool all_decayed = true;
  bool any_separated = false;
  const std::size_t window = kSeparationHorizon;

  for (std::size_t k = 1; k <= 3; ++k) {
    const WindowFunction f = WindowFunction::coordinate_indicator(t.grid(), k, t.grid() - 1);
    const double mean = f.mean();
    const double final_norm = t.apply_power(f, horizon).minus_constant(mean).l2_norm();
    out.final_norms.push_back(final_norm);
    if (!(final_norm < tol)) all_decayed = false;

    std::vector<WindowFunction> orbit{f};
    for (std::size_t n = 1; n <= window; ++n) orbit.push_back(t.apply(orbit.back()));
    double distance = std::numeric_limits<double>::infinity();
    double deviation = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < orbit.size(); ++n) {
      deviation = std::min(deviation, orbit[n].minus_constant(mean).l2_norm());
      for (std::size_t m = 0; m < n; ++m) distance = std::min(distance, l1_distance(orbit[m], orbit[n]));
    }
    out.min_pairwise_distance = std::min(out.min_pairwise_distance, distance);
    out.min_deviation = std::min(out.min_deviation, deviation);
    if (distance >= kSeparation && deviation >= kSeparation) {
      any_separated = true;
      separated_distance = std::min(separated_distance, distance);
      separated_deviation = std::min(separated_deviation, deviation);
    }
  }

  if (all_decayed) {
    out.verdict = Verdict::Null;
    out.route = Route::OrbitDecay;
  } else if (any_separated) {
    out.verdict = Verdict::NotNull;
    out.route = Route::OrbitSeparation;
    out.min_pairwise_distance = separated_distance;
    out.min_deviation = separated_deviation;
  } else {
    out.verdict = Verdict::Inconclusive;
    out.route = Route::OrbitSeparation;
  }
  return out;
}

DecayCurve orbit_decay_test(const DenseOperator& t, const Eigen::VectorXd& f, std::size_t horizon,
                            double tol) {
  const SpectralSplit split = jdlg_decompose(t);
  Eigen::VectorXd g = f - conditional_expectation_rev(split, f);
  DecayCurve out;
  out.norms.push_back(t.space().l2_norm(g));
  for (std::size_t n = 1; n <= horizon; ++n) {
    g = t.apply(g);
    out.norms.push_back(t.space().l2_norm(g));
  }
  out.decayed = out.norms.back() < tol;
  return out;
}

DecayCurve orbit_decay_test(const ShiftOperator& t, const WindowFunction& f, std::size_t horizon,
                            double tol) {
  const double mean = f.mean();
  WindowFunction g = f;
  DecayCurve out;
  out.norms.push_back(g.minus_constant(mean).l2_norm());
  for (std::size_t n = 1; n <= horizon; ++n) {
    g = t.apply(g);
    out.norms.push_back(g.minus_constant(mean).l2_norm());
  }
  out.decayed = out.norms.back() < tol;
  return out;
}

PrecompactnessReport orbit_precompactness_diagnostic(const DenseOperator& t,
                                                     const Eigen::VectorXd& f, std::size_t horizon,
                                                     double eps) {
  if (horizon < 2) throw Error(ErrorCode::BadParameters, "orbit diagnostic needs N >= 2");
  std::vector<Eigen::VectorXd> orbit{f};
  for (std::size_t n = 1; n <= horizon; ++n) orbit.push_back(t.apply(orbit.back()));
  const FiniteSpace& space = t.space();
  return greedy_net(orbit, eps, [&space](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return space.l1_norm(a - b);
  });
}

PrecompactnessReport orbit_precompactness_diagnostic(const ShiftOperator& t,
                                                     const WindowFunction& f, std::size_t horizon,
                                                     double eps) {
  if (horizon < 2) throw Error(ErrorCode::BadParameters, "orbit diagnostic needs N >= 2");
  std::vector<WindowFunction> orbit{f};
  for (std::size_t n = 1; n <= horizon; ++n) orbit.push_back(t.apply(orbit.back()));
  return greedy_net(orbit, eps, [](const WindowFunction& a, const WindowFunction& b) {
    return l1_distance(a, b);
  });
}

RotationFactor hvn_factor(const DenseOperator& t, const SpectralSplit& split) {
  require_same_space(t.space(), split.space);
  std::size_t unit = 0;
  for (const auto& z : split.all_eigenvalues) {
    if (std::abs(z - Complex(1.0)) < kClusterTolerance) ++unit;
  }
  if (unit != 1) {
    throw Error(ErrorCode::NotErgodic,
                "eigenvalue 1 has multiplicity " + std::to_string(unit));
  }

  const Eigen::MatrixXd& rev = split.rev_basis;
  const std::size_t n = t.size();
  const double scale = std::max(1.0, rev.cwiseAbs().maxCoeff());
  RotationFactor out;
  out.projection.assign(n, 0);
  std::vector<std::size_t> representative;
  for (std::size_t x = 0; x < n; ++x) {
    const auto row = rev.row(static_cast<Eigen::Index>(x));
    std::size_t a = 0;
    for (; a < representative.size(); ++a) {
      const auto rep = rev.row(static_cast<Eigen::Index>(representative[a]));
      if ((row - rep).cwiseAbs().maxCoeff() <= kClusterTolerance * scale) break;
    }
    if (a == representative.size()) {
      representative.push_back(x);
      out.atoms.emplace_back();
    }
    out.atoms[a].push_back(x);
    out.projection[x] = a;
  }
  const std::size_t k = out.atoms.size();
  if (k != static_cast<std::size_t>(rev.cols())) {
    throw Error(ErrorCode::NotMarkovEmbeddingOnRev,
                std::to_string(k) + " atoms for a reversible part of dimension " +
                    std::to_string(rev.cols()));
  }

  std::vector<Eigen::VectorXd> indicators(k, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t x : out.atoms[a]) indicators[a][static_cast<Eigen::Index>(x)] = 1.0;
    detail::CompensatedSum mass;
    for (std::size_t x : out.atoms[a]) mass.add(t.space().weight(x));
    out.atom_masses.push_back(mass.value());
  }
  const auto [lo, hi] = std::minmax_element(out.atom_masses.begin(), out.atom_masses.end());
  out.mass_spread = *hi - *lo;

  // T 1_A = 1_B means R(B) = A.
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  out.rotation.assign(k, kUnset);
  for (std::size_t a = 0; a < k; ++a) {
    const Eigen::VectorXd image = t.apply(indicators[a]);
    Eigen::Index peak = 0;
    image.maxCoeff(&peak);
    const std::size_t b = out.projection[static_cast<std::size_t>(peak)];
    if ((image - indicators[b]).cwiseAbs().maxCoeff() > kIndicatorTolerance || out.rotation[b] != kUnset) {
      throw Error(ErrorCode::NotMarkovEmbeddingOnRev,
                  "image of atom " + std::to_string(a) + " is not an atom indicator");
    }
    out.rotation[b] = a;
  }

  for (std::size_t a = 0; a < k; ++a) {
    Eigen::VectorXd lifted(static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
      lifted[static_cast<Eigen::Index>(x)] = out.rotation[out.projection[x]] == a ? 1.0 : 0.0;
    }
    out.factor_residual =
        std::max(out.factor_residual, t.space().l2_norm(t.apply(indicators[a]) - lifted));
  }

  std::size_t length = 1;
  for (std::size_t a = out.rotation[0]; a != 0 && length <= k; a = out.rotation[a]) ++length;
  out.single_cycle = length == k;
  return out;
}

double transition_support_check(const DenseOperator& t, const RotationFactor& factor) {
  const Eigen::MatrixXd& p = t.matrix();
  double out = 0.0;
  for (std::size_t x = 0; x < t.size(); ++x) {
    const std::size_t target = factor.rotation[factor.projection[x]];
    detail::CompensatedSum sum;
    for (std::size_t y : factor.atoms[target]) {
      sum.add(p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)));
    }
    out = std::max(out, std::abs(1.0 - sum.value()));
  }
  return out;
}

EquivalenceAudit equivalence_audit(const DenseOperator& t, std::size_t horizon, double tol) {
  const SpectralSplit split = jdlg_decompose(t);
  const UnitarySplit unitary = nf_decompose(t);
  const Eigen::MatrixXd power = t.power_matrix(horizon);
  EquivalenceAudit out;
  out.aws_spectral_radius = split.aws_spectral_radius;
  out.spectral_null = split.aws_spectral_radius < 1.0 - kSpectralGap;
  out.aws_decay = max_orbit_norm(t.space(), power, split.aws_basis);
  out.decay_null = out.aws_decay < tol;
  // The unitary part of a finite contraction always has discrete spectrum.
  out.cnu_decay = max_orbit_norm(t.space(), power, unitary.cnu_basis);
  out.nf_null = out.cnu_decay < tol;
  return out;
}

}  // namespace dsent
