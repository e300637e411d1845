#include "phasesep/solver.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace phasesep {

SolverSettings SolverSettings::from_env() {
  const char* v = std::getenv("PHASESEP_PRECISION");
  if (v == nullptr || *v == '\0' || std::string(v) == "strict") {
    return strict();
  }
  if (std::string(v) == "fast") {
    return fast();
  }
  throw std::invalid_argument(
      "PHASESEP_PRECISION must be 'strict' or 'fast', got '" + std::string(v) + "'");
}

void CubicCondition::validate() const {
  for (double v : {c3, c2, c1, c0, rhs}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("condition coefficients must be finite");
    }
  }
  if (!(c3 > 0.0)) {
    throw std::invalid_argument("condition must have positive cubic coefficient");
  }
}

namespace {

std::string describe(const char* what, const char* name, double value) {
  std::ostringstream os;
  os << what << " (" << name << " = " << value << ")";
  return os.str();
}

}  // namespace

CubicCondition general_condition(double s) {
  if (!(std::isfinite(s) && s > 0.0)) {
    throw std::invalid_argument("squeezing parameter s must be positive");
  }
  CubicCondition c;
  c.c3 = 1.0 / 3.0;
  c.c2 = -2.0 * s / 3.0;
  c.c1 = 1.0;
  c.c0 = -1.0 / s;
  c.rhs = 0.0;
  c.description = describe("noise-split determinant bound", "s", s);
  return c;
}

CubicCondition epr_condition(double c, double sP2, std::optional<double> explicit_sX2) {
  if (!(std::isfinite(c) && c > 0.0)) {
    throw std::invalid_argument("correlation parameter c must be positive");
  }
  if (!(std::isfinite(sP2) && sP2 >= 0.0)) {
    throw std::invalid_argument("sP2 must be non-negative and finite");
  }
  double sX2 = 1.0 / (4.0 * c);
  if (explicit_sX2) {
    if (!(std::isfinite(*explicit_sX2) && *explicit_sX2 >= 0.0)) {
      throw std::invalid_argument("sX2 must be non-negative and finite");
    }
    sX2 = *explicit_sX2;
  }
  CubicCondition cond;
  cond.c3 = 8.0 / 3.0;
  cond.c2 = 4.0 * c;
  cond.c1 = 8.0;
  cond.c0 = sX2 + 4.0 * sP2;
  cond.rhs = 2.0;
  cond.description = describe("pair-variance sum bound", "c", c);
  return cond;
}

CubicCondition epr_envelope_condition() {
  CubicCondition cond;
  cond.c3 = 8.0 / 3.0;
  cond.c2 = 0.0;
  cond.c1 = 10.0;
  cond.c0 = 0.0;
  cond.rhs = 2.0;
  cond.description = "pair-variance sum bound, worst-case envelope";
  return cond;
}

double ThresholdResult::t_physical(const PhysicalParams& params) const {
  params.validate();
  return t_bar * std::sqrt(params.hbar * params.mass / params.diffusion);
}

double ThresholdResult::conversion_factor() const {
  return t_bar * std::numbers::sqrt2;
}

namespace {

// g(t) = condition value - rhs; thresholds are roots of g.
double gap(const CubicCondition& c, double t) { return c.value(t) - c.rhs; }

double gap_scale(const CubicCondition& c, double t) {
  const double at = std::abs(t);
  return std::max(1.0, ((std::abs(c.c3) * at + std::abs(c.c2)) * at + std::abs(c.c1)) * at +
                           std::abs(c.c0) + std::abs(c.rhs));
}

// Largest real root of g.  c3 > 0, so g -> +inf; the rightmost crossing
// always sits on an increasing branch, giving the bracket orientation
// g(lo) < 0 < g(hi).
double largest_root(const CubicCondition& c, double root_tol) {
  double lo;
  double hi;
  const double disc = c.c2 * c.c2 - 3.0 * c.c3 * c.c1;
  bool have_bracket = false;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double t_fall = (-c.c2 - sq) / (3.0 * c.c3);  // local maximum
    const double t_rise = (-c.c2 + sq) / (3.0 * c.c3);  // local minimum
    if (gap(c, t_rise) < 0.0) {
      lo = t_rise;
      hi = std::max(t_rise + 1.0, 2.0 * std::abs(t_rise));
      have_bracket = true;
    } else if (gap(c, t_rise) == 0.0) {
      return t_rise;
    } else {
      // Entire right half beyond the local maximum stays positive; the
      // largest root (if any) is on the left increasing branch.
      hi = t_fall;
      lo = std::min(hi - 1.0, -1.0);
      have_bracket = true;
    }
  } else {
    // Monotone increasing: single real root.
    lo = 0.0;
    hi = 1.0;
    if (gap(c, lo) > 0.0) {
      hi = lo;
      lo = -1.0;
    }
    have_bracket = true;
  }
  if (!have_bracket) {
    throw std::domain_error("failed to bracket threshold root");
  }
  for (int i = 0; gap(c, hi) < 0.0; ++i) {
    if (i > 200) throw std::domain_error("threshold bracket expansion failed (upper)");
    hi = hi * 2.0 + 1.0;
  }
  for (int i = 0; gap(c, lo) > 0.0; ++i) {
    if (i > 200) throw std::domain_error("threshold bracket expansion failed (lower)");
    lo = lo * 2.0 - 1.0;
  }
  while (hi - lo > root_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // interval at floating-point resolution
    if (gap(c, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Newton polish from the bisection estimate (kept inside the bracket).
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const double dg = (3.0 * c.c3 * t + 2.0 * c.c2) * t + c.c1;
    if (std::abs(dg) < 1e-30) break;
    const double step = gap(c, t) / dg;
    const double next = t - step;
    if (next < lo - root_tol || next > hi + root_tol) break;
    t = next;
  }
  return t;
}

void verify_sweep(const CubicCondition& c, double from, const SolverSettings& s) {
  const double start = std::max(from, 0.0);
  const long n = std::lround(std::ceil((s.sweep_t_max - start) / s.sweep_step));
  for (long k = 0; k <= n; ++k) {
    const double t = start + static_cast<double>(k) * s.sweep_step;
    if (gap(c, t) < -1e-9 * gap_scale(c, t)) {
      throw std::domain_error("threshold verification sweep failed: '" +
                              c.description + "' violated beyond the root");
    }
  }
}

}  // namespace

ThresholdResult threshold(const CubicCondition& cond, const SolverSettings& settings) {
  cond.validate();
  ThresholdResult result;
  result.parameter = std::numeric_limits<double>::quiet_NaN();
  const double root = largest_root(cond, settings.root_tol);
  if (root <= 0.0) {
    // The condition never fails at non-negative times.
    if (gap(cond, 0.0) < -1e-9 * gap_scale(cond, 0.0)) {
      throw std::domain_error("threshold analysis failed: negative largest root "
                              "with unsatisfied condition at t = 0");
    }
    result.t_bar = 0.0;
    result.residual = 0.0;
    result.already_satisfied = true;
  } else {
    result.t_bar = root;
    result.residual = std::abs(gap(cond, root));
    result.already_satisfied = false;
    if (result.residual > 1e-9 * gap_scale(cond, root)) {
      throw std::domain_error("threshold root polish failed: residual too large");
    }
  }
  verify_sweep(cond, result.t_bar, settings);
  return result;
}

ThresholdResult general_threshold(double s, const SolverSettings& settings) {
  ThresholdResult r = threshold(general_condition(s), settings);
  r.parameter = s;
  return r;
}

ThresholdResult epr_threshold(double c, double sP2, const SolverSettings& settings) {
  ThresholdResult r = threshold(epr_condition(c, sP2), settings);
  r.parameter = c;
  return r;
}

std::pair<double, ThresholdResult> optimize_s(double s_lo, double s_hi,
                                              const SolverSettings& settings) {
  if (!(std::isfinite(s_lo) && std::isfinite(s_hi) && 0.0 < s_lo && s_lo < s_hi)) {
    throw std::invalid_argument("optimize_s requires 0 < s_lo < s_hi");
  }
  const auto objective = [&](double s) {
    return largest_root(general_condition(s), settings.root_tol);
  };

  // Deterministic coarse scan; ties keep the smaller s.
  const long n = std::lround(std::ceil((s_hi - s_lo) / settings.scan_step));
  double best_s = s_lo;
  double best_t = objective(s_lo);
  for (long k = 1; k <= n; ++k) {
    const double s = std::min(s_lo + static_cast<double>(k) * settings.scan_step, s_hi);
    const double t = objective(s);
    if (t < best_t) {
      best_t = t;
      best_s = s;
    }
  }

  // Golden-section refinement in the bracket around the scan minimum.
  double a = std::max(s_lo, best_s - settings.scan_step);
  double b = std::min(s_hi, best_s + settings.scan_step);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > settings.golden_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = objective(x2);
    }
  }
  const double s_star = 0.5 * (a + b);
  ThresholdResult result = general_threshold(s_star, settings);
  return {s_star, result};
}

std::pair<double, ThresholdResult> worst_case_epr(const SolverSettings& settings) {
  ThresholdResult result = threshold(epr_envelope_condition(), settings);
  if (result.t_bar <= 0.0) {
    throw std::domain_error("worst-case envelope produced a non-positive threshold");
  }
  const double c_star = 1.0 / (4.0 * result.t_bar);
  result.parameter = c_star;
  return {c_star, result};
}

}  // namespace phasesep
