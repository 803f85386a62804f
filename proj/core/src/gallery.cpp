#include "dsent/gallery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <numeric>
#include <numbers>

#include "dsent/entropy.hpp"
#include "dsent/error.hpp"
#include "dsent/nullity.hpp"
#include "dsent/shift.hpp"
#include "dsent/spectral.hpp"

namespace dsent {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

PropertyOutcome outcome(bool passed, std::string detail) { return {passed, std::move(detail)}; }

using OperatorPtr = std::shared_ptr<const DenseOperator>;

OperatorPtr share(DenseOperator t) { return std::make_shared<const DenseOperator>(std::move(t)); }

ExpectedProperty null_verdict(OperatorPtr t) {
  return {"nullity verdict null", "computed", [t] {
            const NullityReport r = nullity_check(*t, 256, 1e-6);
            return outcome(r.verdict == Verdict::Null,
                           to_string(r.verdict) + " via " + to_string(r.route) +
                               ", aws radius " + num(r.aws_spectral_radius));
          }};
}

ExpectedProperty rev_dimension(OperatorPtr t, long expected, std::string basis) {
  return {"rev dimension " + std::to_string(expected), std::move(basis), [t, expected] {
            const SpectralSplit s = jdlg_decompose(*t);
            return outcome(s.rev_basis.cols() == expected, "rev dimension " + std::to_string(s.rev_basis.cols()));
          }};
}

ExpectedProperty aws_radius(OperatorPtr t, double expected, std::string basis) {
  return {"aws spectral radius " + num(expected), std::move(basis), [t, expected] {
            const SpectralSplit s = jdlg_decompose(*t);
            return outcome(std::abs(s.aws_spectral_radius - expected) < 1e-8,
                           "aws radius " + num(s.aws_spectral_radius));
          }};
}

ExpectedProperty splits_agree(OperatorPtr t) {
  return {"rev span equals uni span", "structural", [t] {
            const SpectralSplit s = jdlg_decompose(*t);
            const UnitarySplit u = nf_decompose(*t);
            const double angle = max_principal_angle(t->space(), s.rev_basis, u.uni_basis);
            return outcome(angle < 1e-6, "max principal angle " + num(angle));
          }};
}

ExpectedProperty rotation_factor(OperatorPtr t, std::size_t q, std::size_t steps) {
  return {"factor is rotation by " + std::to_string(steps) + " on Z_" + std::to_string(q),
          "closed-form", [t, q, steps] {
            const RotationFactor f = hvn_factor(*t, jdlg_decompose(*t));
            bool ok = f.atoms.size() == q && f.single_cycle == (std::gcd(q, steps) == 1) &&
                      f.mass_spread <= 1e-10 && f.factor_residual < 1e-8;
            for (std::size_t a = 0; ok && a < f.rotation.size(); ++a) ok = f.rotation[a] == (a + steps) % q;
            return outcome(ok, std::to_string(f.atoms.size()) + " atoms, mass spread " +
                                   num(f.mass_spread) + ", factor residual " + num(f.factor_residual));
          }};
}

ExpectedProperty support_exact(OperatorPtr t) {
  return {"transition support deviation 0", "closed-form", [t] {
            const RotationFactor f = hvn_factor(*t, jdlg_decompose(*t));
            const double dev = transition_support_check(*t, f);
            return outcome(dev == 0.0, "deviation " + num(dev));
          }};
}

std::vector<GalleryEntry> build() {
  std::vector<GalleryEntry> out;

  {
    const auto t = share(mean_projection(FiniteSpace::make(Eigen::Vector<double, 5>(0.125, 0.125, 0.25, 0.25, 0.25))));
    out.push_back({"mean_projection", "weights=[1/8,1/8,1/4,1/4,1/4]",
                   "Sf = integral of f against mu.",
                   {null_verdict(t), rev_dimension(t, 1, "structural"), aws_radius(t, 0.0, "structural"),
                    splits_agree(t),
                    {"quasi-compact at r=1/2 with F_dim 1", "structural", [t] {
                       const QuasiCompactReport r = quasi_compact_classify(*t, 0.5);
                       return outcome(r.is_quasi_compact && r.f_dim == 1 && r.interior_radius < 1e-12,
                                      "F_dim " + std::to_string(r.f_dim) + ", interior radius " +
                                          num(r.interior_radius));
                     }}}});
  }

  {
    const auto base = share(cyclic_permutation(3));
    const auto t = share(convex_combination(0.25, *base, mean_projection(base->space())));
    out.push_back({"perturbation", "T=3-cycle, alpha=1/4",
                   "(1-alpha)T + alpha S with S the mean projection.",
                   {null_verdict(t), rev_dimension(t, 1, "closed-form"), aws_radius(t, 0.75, "closed-form"),
                    splits_agree(t),
                    {"L1 distance to T at most 2/n for alpha=1/n", "closed-form", [base] {
                       double worst = -1.0;
                       for (int n = 1; n <= 100; ++n) {
                         const DenseOperator p =
                             convex_combination(1.0 / n, *base, mean_projection(base->space()));
                         const double d = l1_operator_norm(base->space(), p.matrix() - base->matrix());
                         worst = std::max(worst, d - 2.0 / n);
                       }
                       return outcome(worst <= 1e-12, "max excess over 2/n " + num(worst));
                     }}}});
  }

  {
    constexpr std::size_t q = 8;
    const auto t = share(contraction_rotation_operator(q, 1));
    out.push_back({"contraction_rotation", "q=8, p=1", "1/2 (f o R) + 1/2 integral of f.",
                   {null_verdict(t), rev_dimension(t, 1, "closed-form"), aws_radius(t, 0.5, "closed-form"),
                    splits_agree(t),
                    {"e_n eigenfunctions with eigenvalue omega^n/2", "closed-form", [t] {
                       double worst = 0.0;
                       const Eigen::MatrixXcd p = t->matrix().cast<Complex>();
                       for (std::size_t n = 1; n < q; ++n) {
                         Eigen::VectorXcd e(static_cast<Eigen::Index>(q));
                         for (std::size_t z = 0; z < q; ++z) {
                           e[static_cast<Eigen::Index>(z)] = std::polar(1.0, 2.0 * std::numbers::pi * double(n * z) / q);
                         }
                         const Complex lambda = 0.5 * std::polar(1.0, 2.0 * std::numbers::pi * double(n) / q);
                         worst = std::max(worst, (p * e - lambda * e).cwiseAbs().maxCoeff());
                       }
                       return outcome(worst < 1e-10, "max residual " + num(worst));
                     }},
                    {"|T^m Re e_1| = 2^-m |Re e_1|", "closed-form", [t] {
                       Eigen::VectorXd f(static_cast<Eigen::Index>(q));
                       for (std::size_t z = 0; z < q; ++z) f[static_cast<Eigen::Index>(z)] = std::cos(2.0 * std::numbers::pi * double(z) / q);
                       const DecayCurve c = orbit_decay_test(*t, f, 20, 1e-5);
                       double worst = 0.0;
                       for (std::size_t m = 0; m <= 20; ++m) {
                         worst = std::max(worst, std::abs(c.norms[m] / c.norms[0] - std::ldexp(1.0, -int(m))));
                       }
                       return outcome(worst < 1e-10, "max deviation " + num(worst));
                     }}}});
  }

  out.push_back(
      {"shift_average", "grid=2", "T = S R on the product shift with coordinate averaging R.",
       {{"nullity verdict null", "closed-form", [] {
           const NullityReport r = nullity_check(ShiftOperator::averaged(2), 200, 0.01);
           return outcome(r.verdict == Verdict::Null, to_string(r.verdict) + " via " + to_string(r.route));
         }},
        {"decay law (k-1)/(m+k-1)", "closed-form", [] {
           const ShiftOperator t = ShiftOperator::averaged(2);
           double worst = 0.0;
           for (std::size_t k = 1; k <= 3; ++k) {
             const WindowFunction f = WindowFunction::coordinate(2, k, {0.0, 1.0}).minus_constant(0.5);
             const DecayCurve c = orbit_decay_test(t, f, 10, 1.0);
             for (std::size_t m = 0; m <= 10; ++m) {
               const double expected = k == 1 && m == 0 ? 1.0 : double(k - 1) / double(m + k - 1);
               worst = std::max(worst, std::abs(c.norms[m] / c.norms[0] - expected));
             }
           }
           return outcome(worst < 1e-12, "max deviation " + num(worst));
         }},
        {"no eigenfunctions in windows up to 3", "closed-form", [] {
           const ShiftOperator t = ShiftOperator::averaged(2);
           double worst = 1e300;
           for (std::size_t w = 1; w <= 3; ++w) worst = std::min(worst, min_eigen_residual(t, w, 0.25));
           return outcome(worst >= 0.1, "min certified residual " + num(worst));
         }},
        {"orbit of an indicator is precompact", "closed-form", [] {
           const PrecompactnessReport r = orbit_precompactness_diagnostic(
               ShiftOperator::averaged(2), WindowFunction::coordinate_indicator(2, 1, 1), 30, 0.1);
           return outcome(r.precompact_evidence, "final net size " + std::to_string(r.net_sizes.back()));
         }}}});

  out.push_back(
      {"shift_koopman", "grid=2", "Koopman left shift on the Bernoulli(1/2) product space.",
       {{"nullity verdict not_null, separation 1/2", "computed", [] {
           const NullityReport r = nullity_check(ShiftOperator::koopman(2), 64, 1e-3);
           return outcome(r.verdict == Verdict::NotNull && r.route == Route::OrbitSeparation &&
                              r.min_pairwise_distance == 0.5,
                          to_string(r.verdict) + ", min distance " + num(r.min_pairwise_distance));
         }},
        {"H_n = n log 2", "computed", [] {
           const std::vector<WindowFunction> f{WindowFunction::coordinate_indicator(2, 1, 1)};
           const EntropyTrace tr = entropy_trace(ShiftOperator::koopman(2), f, 10);
           double worst = 0.0;
           for (const auto& row : tr.rows) worst = std::max(worst, std::abs(row.h - double(row.n) * std::log(2.0)));
           return outcome(worst < 1e-12, "max deviation " + num(worst));
         }},
        {"powers_of_two slope log 2", "computed", [] {
           const std::vector<WindowFunction> f{WindowFunction::coordinate_indicator(2, 1, 1)};
           const EntropyTrace tr =
               sequence_entropy_trace(ShiftOperator::koopman(2), f, SequenceSpec::powers_of_two(), 4);
           double worst = 0.0;
           for (const auto& row : tr.rows) worst = std::max(worst, std::abs(row.h_over_n - std::log(2.0)));
           return outcome(worst < 1e-12, "max deviation " + num(worst));
         }},
        {"orbit net grows linearly", "computed", [] {
           const PrecompactnessReport r = orbit_precompactness_diagnostic(
               ShiftOperator::koopman(2), WindowFunction::coordinate_indicator(2, 1, 1), 12, 0.1);
           bool linear = true;
           for (std::size_t n = 0; n < r.net_sizes.size(); ++n) linear = linear && r.net_sizes[n] == n + 1;
           return outcome(linear && !r.precompact_evidence && r.min_pairwise_distance == 0.5,
                          "final net size " + std::to_string(r.net_sizes.back()));
         }}}});

  for (const auto variant : {AnnulusVariant::Plain, AnnulusVariant::Modified}) {
    const bool plain = variant == AnnulusVariant::Plain;
    const auto t = share(annulus_operator(8, 4, 3, variant));
    GalleryEntry e{plain ? "annulus_plain" : "annulus_modified", "q=8, m=4, p=3",
                   plain ? "Rotation by 3/8 on the circle followed by fiber averaging."
                         : "Annulus with single-point fibers over half of the circle.",
                   {null_verdict(t), rev_dimension(t, 8, "closed-form"), splits_agree(t),
                    rotation_factor(t, 8, 3), support_exact(t)}};
    if (plain) {
      e.properties.push_back({"conditional expectation averages fibers", "closed-form", [t] {
                                const SpectralSplit s = jdlg_decompose(*t);
                                const auto fibers = annulus_fibers(8, 4, AnnulusVariant::Plain);
                                Eigen::VectorXd f(static_cast<Eigen::Index>(t->size()));
                                for (Eigen::Index x = 0; x < f.size(); ++x) f[x] = double((x * 7) % 5) / 4.0;
                                const Eigen::VectorXd g = conditional_expectation_rev(s, f);
                                double worst = 0.0;
                                for (const auto& fiber : fibers) {
                                  double mean = 0.0;
                                  for (auto x : fiber) mean += f[static_cast<Eigen::Index>(x)];
                                  mean /= double(fiber.size());
                                  for (auto x : fiber) worst = std::max(worst, std::abs(g[static_cast<Eigen::Index>(x)] - mean));
                                }
                                return outcome(worst < 1e-10, "max deviation " + num(worst));
                              }});
    }
    out.push_back(std::move(e));
  }

  {
    const auto t = share(cyclic_permutation(5));
    out.push_back({"cyclic_permutation", "q=5", "x -> x+1 on Z_5.",
                   {null_verdict(t), rev_dimension(t, 5, "structural"), splits_agree(t),
                    rotation_factor(t, 5, 1), support_exact(t),
                    {"unitary part is everything", "structural", [t] {
                       const UnitarySplit u = nf_decompose(*t);
                       return outcome(u.uni_basis.cols() == 5 && u.cnu_basis.cols() == 0,
                                      "uni dimension " + std::to_string(u.uni_basis.cols()));
                     }}}});
  }
  return out;
}

}  // namespace

bool GalleryReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed; });
}

const std::vector<GalleryEntry>& gallery_list() {
  static const std::vector<GalleryEntry> entries = build();
  return entries;
}

GalleryReport gallery_run(std::string_view name) {
  const auto& entries = gallery_list();
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [name](const GalleryEntry& e) { return e.name == name; });
  if (it == entries.end()) throw Error(ErrorCode::UnknownEntry, "no gallery entry '" + std::string(name) + "'");

  const auto start = std::chrono::steady_clock::now();
  GalleryReport report{it->name, it->parameters, {}};
  for (const auto& p : it->properties) {
    PropertyResult r{p.name, p.basis, false, {}};
    try {
      const PropertyOutcome o = p.check();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const Error& e) {
      r.detail = e.what();
    }
    report.results.push_back(std::move(r));
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<std::pair<std::string, DenseOperator>> gallery_dense_operators() {
  return {
      {"mean_projection",
       mean_projection(FiniteSpace::make(Eigen::Vector<double, 5>(0.125, 0.125, 0.25, 0.25, 0.25)))},
      {"perturbation", convex_combination(0.25, cyclic_permutation(3), mean_projection(FiniteSpace::uniform(3)))},
      {"contraction_rotation", contraction_rotation_operator(8, 1)},
      {"annulus_plain", annulus_operator(8, 4, 3, AnnulusVariant::Plain)},
      {"annulus_modified", annulus_operator(8, 4, 3, AnnulusVariant::Modified)},
      {"cyclic_permutation", cyclic_permutation(5)},
  };
}

}  // namespace dsent
