#pragma once

#include <Eigen/Core>

#include <optional>

#include "phasesep/phase_space.hpp"

namespace phasesep {

/// Rotated two-particle coordinates, ordered (K, X, P, Q):
///   X = x1 - x2,  K = (p1 - p2) / 2,  Q = x1 + x2,  P = (p1 + p2) / 2.
/// (K, X) and (P, Q) are canonical pairs, so a rotated state is again a
/// two-mode state in (momentum, position) ordering per mode.
Eigen::Matrix4d epr_rotation();

/// Change of variables (p1, x1, p2, x2) -> (K, X, P, Q) applied to a general
/// two-mode Gaussian state; mean and covariance transform congruently.
GaussianState rotate_to_epr(const GaussianState& two_mode);

/// Inverse change of variables; rotate_from_epr(rotate_to_epr(s)) == s.
GaussianState rotate_from_epr(const GaussianState& rotated);

/// Zero-mean two-particle Gaussian state that factorizes in the rotated
/// coordinates, described by its four widths.  This family is closed under
/// the criteria below (the separability tests use only these variances).
struct FactoredBipartiteState {
  double sK2 = 0.0;
  double sX2 = 0.0;
  double sP2 = 0.0;
  double sQ2 = 0.0;
  UnitSystem units = UnitSystem::dimensionless;

  /// All widths non-negative and finite.
  void validate() const;

  /// Admissible Wigner function: both canonical pairs obey the uncertainty
  /// bound, sK2 * sX2 >= hbar^2/4 and sP2 * sQ2 >= hbar^2/4 (up to kPsdTol).
  bool is_wigner_valid(double hbar = 1.0) const;

  /// True when some width vanishes (idealized squeezing limit).
  bool degenerate() const;
};

/// Correlated pair state: sK2 = c, sX2 = 1/(4c) (the K-X pair saturates the
/// uncertainty bound), with free sP2 and sQ2.  sP2 = 0 is the idealized
/// perfectly-correlated limit and is accepted as an algebraic limit state;
/// otherwise sP2 * sQ2 >= 1/4 is required.  Throws std::invalid_argument for
/// c <= 0 or inadmissible widths.
FactoredBipartiteState make_epr_state(double c, double sP2 = 0.0, double sQ2 = 1.0);

/// Widths read off the diagonal of a rotated two-mode covariance.
FactoredBipartiteState widths_from_rotated(const GaussianState& rotated);

/// Embeds a factored state as a two-mode Gaussian state in the original
/// particle coordinates (diagonal covariance in the rotated frame).
GaussianState to_two_mode_state(const FactoredBipartiteState& state);

enum class Separability { separable, entangled };

std::string to_string(Separability verdict);

/// Arithmetic form of the partial-interchange separability test: separable
/// iff the interchanged pairs also obey the uncertainty bound,
///   sX2 * sP2 >= hbar^2/4  and  sQ2 * sK2 >= hbar^2/4.
/// On this factored Gaussian family the test is necessary and sufficient.
/// No validity gate; meaningful only for admissible states.
bool ph_condition(const FactoredBipartiteState& state, double hbar = 1.0);

/// Validated partial-interchange test; throws std::invalid_argument when the
/// input is not an admissible Wigner state.
Separability ph_interchange_test(const FactoredBipartiteState& state, double hbar = 1.0);

/// Left-hand side of the two-observable separability inequality for the
/// variable pair (X, P): separable states satisfy sX2 + 4 sP2 >= 2.
/// Dimensionless states only.
double duan_lhs(const FactoredBipartiteState& state);

/// Mirrored variable pair (Q, K): separable states satisfy sQ2 + 4 sK2 >= 2.
double duan_mirror_lhs(const FactoredBipartiteState& state);

/// Sharpened form with the free relative scaling lam > 0 optimized out:
///   min_lam (lam * sX2 + 4 sP2 / lam) = 4 sqrt(sX2 * sP2),
/// so the optimized pair condition is equivalent to sX2 * sP2 >= 1/4 and
/// (mirrored) sQ2 * sK2 >= 1/4 -- the same products the interchange test
/// bounds.  Returned as the pair (optimized lhs, mirrored optimized lhs).
std::pair<double, double> duan_optimized_pair(const FactoredBipartiteState& state);

/// Snapshot of every criterion for one state; the booleans are evaluated
/// without throwing so that inadmissible states can still be reported.
struct CriterionReport {
  bool wigner_valid = false;
  bool ph_separable = false;
  double duan_lhs = 0.0;
  double duan_mirror_lhs = 0.0;
};

CriterionReport criterion_report(const FactoredBipartiteState& state, double hbar = 1.0);

/// Width evolution of both rotated canonical pairs under drift with an
/// effective mass and momentum diffusion acting on the pair coordinates:
///   mom -> 2 d t + mom,
///   pos -> (2/3) d t^3 / m^2 + mom t^2 / m^2 + pos.
FactoredBipartiteState evolve_factored_pairs(const FactoredBipartiteState& state,
                                             double t, double effective_mass,
                                             double diffusion);

/// Dimensionless width evolution of the rotated pairs with the conventional
/// coefficients (effective mass 1/2, diffusion constant 1):
///   sK2 -> 2 t + sK2,                sP2 -> 2 t + sP2,
///   sX2 -> (8/3) t^3 + 4 sK2 t^2 + sX2,
///   sQ2 -> (8/3) t^3 + 4 sP2 t^2 + sQ2.
FactoredBipartiteState evolve_epr(const FactoredBipartiteState& state, double t_bar);

/// Exact evolution of a general two-mode Gaussian state: each particle
/// experiences the single-particle drift and noise independently; cross
/// blocks transform by the drift congruence alone.
GaussianState evolve_bipartite(const GaussianState& two_mode, double t,
                               const PhysicalParams& params);

/// Minimum-uncertainty covariance with squeezing parameter s > 0:
///   [ s     1/2     ]
///   [ 1/2   1/(2 s) ]
/// |A_quarter| = 1/4 for every s.
CovarianceMatrix2 a_quarter(double s);

/// Witness for separability of the evolved state at dimensionless time t:
/// the accumulated noise splits as A(t) = A_quarter(s) + B with B the
/// remainder.  When B is positive definite with |B| >= 1/4, the evolved
/// two-particle state is an explicit mixture of product states.
struct SeparationCertificate {
  double t_bar = 0.0;
  double s = 1.0;
  CovarianceMatrix2 b;
  double det_b = 0.0;
  bool positive_definite = false;
  bool valid = false;
  /// Covariance of the drift-transported particle-1 marginal smoothed by
  /// A_quarter(s); only set when a Gaussian input state was supplied.
  std::optional<CovarianceMatrix2> smeared_cov;
};

/// Certificate at (t_bar, s) in dimensionless units; t_bar >= 0, s > 0.
SeparationCertificate separation_certificate(double t_bar, double s);

/// As above, additionally recording the smeared particle-1 covariance of the
/// supplied dimensionless two-mode state.
SeparationCertificate separation_certificate(double t_bar, double s,
                                             const GaussianState& two_mode);

/// Particle-1 marginal implied by a valid certificate: the initial marginal
/// is drift-transported, smoothed by A_quarter(s), then broadened by B.
/// This equals direct single-particle evolution to time t_bar, since
/// A_quarter + B = A.  Throws std::invalid_argument when the certificate is
/// not valid or the state is not a dimensionless two-mode state.
GaussianState reduce_to_one_particle(const SeparationCertificate& cert,
                                     const GaussianState& two_mode);

}  // namespace phasesep
