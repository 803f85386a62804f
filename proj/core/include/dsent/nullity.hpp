#pragma once

// Nullity verdicts, orbit diagnostics and the rotation factor of the
// reversible part.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dsent/operator.hpp"
#include "dsent/shift.hpp"
#include "dsent/spectral.hpp"

namespace dsent {

enum class Verdict { Null, NotNull, Inconclusive };
enum class Route { Spectral, OrbitDecay, OrbitSeparation };

std::string to_string(Verdict v);
std::string to_string(Route r);

/// Radius below which the aws part is declared strictly contracting.
inline constexpr double kSpectralGap = 1e-6;

struct NullityReport {
  Verdict verdict = Verdict::Inconclusive;
  Route route = Route::Spectral;
  std::size_t horizon = 0;
  /// Dense backend only.
  double aws_spectral_radius = 0.0;
  /// Final orbit norms, one per aws basis vector (dense) or test function (shift).
  std::vector<double> final_norms;
  /// Shift backend: smallest pairwise L1 distance within the separated orbits
  /// and the smallest L2 deviation from the mean along them.
  double min_pairwise_distance = 0.0;
  double min_deviation = 0.0;
};

/// mu-orthogonal projection onto span(rev_basis). Throws SpaceMismatch.
Eigen::VectorXd conditional_expectation_rev(const SpectralSplit& split, const Eigen::VectorXd& f);

/// Null when the aws radius is below 1 - kSpectralGap, otherwise when
/// |T^N b| < tol for every aws basis vector b.
NullityReport nullity_check(const DenseOperator& t, std::size_t horizon, double tol,
                            double eps_spec = kDefaultPeripheralEps);

/// Test family: indicators of {x_k = top atom}, k = 1..3. Null when every
/// orbit decays to its mean below tol at n = N; not null when some orbit
/// stays 1/4-separated (pairwise L1) and 1/4 away from its mean for
/// n <= 10 (independent of N); inconclusive otherwise.
NullityReport nullity_check(const ShiftOperator& t, std::size_t horizon, double tol);

struct DecayCurve {
  /// Index n = 0..N.
  std::vector<double> norms;
  bool decayed = false;
};

/// |T^n (f - E(f|rev))|_2 for n = 0..N.
DecayCurve orbit_decay_test(const DenseOperator& t, const Eigen::VectorXd& f, std::size_t horizon,
                            double tol);
/// |T^n f - int f|_2 for n = 0..N.
DecayCurve orbit_decay_test(const ShiftOperator& t, const WindowFunction& f, std::size_t horizon,
                            double tol);

struct PrecompactnessReport {
  /// Greedy first-fit eps-net size of {T^k f : k <= n}, n = 0..N.
  std::vector<std::size_t> net_sizes;
  double min_pairwise_distance = 0.0;
  /// Net size constant over the last ceil(N/3) prefixes.
  bool precompact_evidence = false;
};

/// Throws BadParameters when N < 2.
PrecompactnessReport orbit_precompactness_diagnostic(const DenseOperator& t,
                                                     const Eigen::VectorXd& f, std::size_t horizon,
                                                     double eps);
PrecompactnessReport orbit_precompactness_diagnostic(const ShiftOperator& t,
                                                     const WindowFunction& f, std::size_t horizon,
                                                     double eps);

struct RotationFactor {
  /// Points of each atom, atoms ordered by their smallest point.
  std::vector<std::vector<std::size_t>> atoms;
  /// rotation[a] = R(a), with T(g o pi) = g o R o pi.
  std::vector<std::size_t> rotation;
  /// Point -> atom.
  std::vector<std::size_t> projection;
  std::vector<double> atom_masses;
  double mass_spread = 0.0;
  bool single_cycle = false;
  /// max over atom indicators g of |T(g o pi) - g o R o pi|_2.
  double factor_residual = 0.0;
};

/// Throws NotErgodic (eigenvalue 1 not simple) and NotMarkovEmbeddingOnRev
/// (rev does not cluster into atoms, or T 1_A is not an atom indicator).
RotationFactor hvn_factor(const DenseOperator& t, const SpectralSplit& split);

/// max over x of |1 - sum of P[x][y] over y in pi^-1(R pi(x))|.
double transition_support_check(const DenseOperator& t, const RotationFactor& factor);

/// Three nullity verdicts that must coincide: spectral radius on aws, decay
/// of aws basis vectors, and decay on the cnu part of the unitary split.
struct EquivalenceAudit {
  bool spectral_null = false;
  bool decay_null = false;
  bool nf_null = false;
  double aws_spectral_radius = 0.0;
  double aws_decay = 0.0;
  double cnu_decay = 0.0;
  bool agree() const { return spectral_null == decay_null && decay_null == nf_null; }
};

EquivalenceAudit equivalence_audit(const DenseOperator& t, std::size_t horizon = 4096,
                                   double tol = 1e-6);

}  // namespace dsent
