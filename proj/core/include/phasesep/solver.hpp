#pragma once

#include <optional>
#include <string>
#include <utility>

#include "phasesep/phase_space.hpp"

namespace phasesep {

/// Numerical knobs for the threshold solver.  `strict()` is the default;
/// `fast()` loosens tolerances for exploratory runs.  `from_env()` resolves
/// the PHASESEP_PRECISION environment variable ("strict" when unset).
struct SolverSettings {
  double root_tol = 1e-12;     ///< bisection tolerance on the dimensionless time
  double sweep_step = 1e-3;    ///< verification sweep step
  double sweep_t_max = 100.0;  ///< verification sweep horizon
  double scan_step = 1e-3;     ///< coarse scan step for parameter optimization
  double golden_tol = 1e-6;    ///< golden-section interval tolerance

  static SolverSettings strict() { return {}; }
  static SolverSettings fast() { return {1e-10, 1e-2, 20.0, 1e-2, 1e-5}; }
  static SolverSettings from_env();
};

/// Polynomial separability condition in the dimensionless time t:
///   c3 t^3 + c2 t^2 + c1 t + c0 >= rhs,  with c3 > 0,
/// so the condition always holds for large enough t.
struct CubicCondition {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
  double rhs = 0.0;
  std::string description;

  double value(double t) const { return ((c3 * t + c2) * t + c1) * t + c0; }
  bool satisfied(double t) const { return value(t) >= rhs; }
  void validate() const;
};

/// Noise-split condition for a general two-particle state with squeezing
/// parameter s > 0:  t^3/3 - (2 s / 3) t^2 + t - 1/s >= 0.  Once it holds,
/// the accumulated noise contains a minimum-uncertainty covariance and the
/// evolved state is certifiably a mixture of products.
CubicCondition general_condition(double s);

/// Pair-variance sum condition for the correlated family with parameter
/// c > 0 (sK2 = c) and initial anti-correlated widths sP2, sX2:
///   (8/3) t^3 + 4 c t^2 + 8 t + sX2 + 4 sP2 >= 2,
/// with sX2 defaulting to the saturated value 1/(4c).
CubicCondition epr_condition(double c, double sP2 = 0.0,
                             std::optional<double> explicit_sX2 = std::nullopt);

/// Upper envelope of epr_condition over all c > 0 (idealized sP2 = 0): the
/// inner minimization gives c*(t) = 1/(4t) and the condition collapses to
///   (8/3) t^3 + 10 t >= 2.
CubicCondition epr_envelope_condition();

/// Smallest dimensionless time from which a condition holds permanently.
struct ThresholdResult {
  double t_bar = 0.0;
  /// The squeezing or correlation parameter the condition was built with
  /// (NaN when the plain threshold() entry point was used).
  double parameter = 0.0;
  /// |condition value - rhs| at the returned time (0 when already satisfied).
  double residual = 0.0;
  /// True when the condition holds for every t >= 0, so t_bar == 0.
  bool already_satisfied = false;

  /// Physical time t_bar * sqrt(hbar m / D).
  double t_physical(const PhysicalParams& params) const;
  /// t_bar expressed in units of sqrt(hbar m / (2 D)), the scale used when
  /// the diffusion coefficient is defined with an extra factor of two.
  double conversion_factor() const;
};

/// Largest real root of (value - rhs), bracketed and bisected to
/// settings.root_tol then Newton-polished; verified by a forward sweep to
/// settings.sweep_t_max.  Throws std::domain_error if verification fails.
ThresholdResult threshold(const CubicCondition& cond,
                          const SolverSettings& settings = SolverSettings::strict());

/// threshold(general_condition(s)) with the parameter recorded.
ThresholdResult general_threshold(double s,
                                  const SolverSettings& settings = SolverSettings::strict());

/// threshold(epr_condition(c, sP2)) with the parameter recorded.
ThresholdResult epr_threshold(double c, double sP2 = 0.0,
                              const SolverSettings& settings = SolverSettings::strict());

/// Minimizes the general threshold over s in [s_lo, s_hi]: deterministic
/// coarse scan (ties resolved toward smaller s) followed by golden-section
/// refinement to settings.golden_tol.  Returns (s*, threshold at s*).
std::pair<double, ThresholdResult> optimize_s(
    double s_lo, double s_hi,
    const SolverSettings& settings = SolverSettings::strict());

/// Maximizes the idealized-correlation threshold over c > 0 via the analytic
/// envelope; returns (c*, uniform threshold), c* = 1 / (4 t*).
std::pair<double, ThresholdResult> worst_case_epr(
    const SolverSettings& settings = SolverSettings::strict());

}  // namespace phasesep
