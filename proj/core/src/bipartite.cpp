#include "phasesep/bipartite.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "phasesep/single_particle.hpp"

namespace phasesep {

namespace {

void require_two_modes(const GaussianState& state, const char* who) {
  state.validate();
  if (state.modes() != 2) {
    throw std::invalid_argument(std::string(who) + " expects a two-mode state");
  }
}

void require_dimensionless(UnitSystem units, const char* who) {
  if (units != UnitSystem::dimensionless) {
    throw std::invalid_argument(std::string(who) + " requires dimensionless units");
  }
}

bool pair_bound_ok(double v1, double v2, double hbar) {
  const double bound = hbar * hbar / 4.0;
  return v1 * v2 >= bound - kPsdTol * std::max(1.0, bound);
}

}  // namespace

Eigen::Matrix4d epr_rotation() {
  Eigen::Matrix4d t;
  // rows: K, X, P, Q; columns: p1, x1, p2, x2
  t << 0.5, 0.0, -0.5, 0.0,
       0.0, 1.0,  0.0, -1.0,
       0.5, 0.0,  0.5, 0.0,
       0.0, 1.0,  0.0, 1.0;
  return t;
}

GaussianState rotate_to_epr(const GaussianState& two_mode) {
  require_two_modes(two_mode, "rotate_to_epr");
  const Eigen::Matrix4d t = epr_rotation();
  GaussianState out = two_mode;
  out.mean = t * two_mode.mean;
  out.cov = t * two_mode.cov * t.transpose();
  return out;
}

GaussianState rotate_from_epr(const GaussianState& rotated) {
  require_two_modes(rotated, "rotate_from_epr");
  const Eigen::Matrix4d t = epr_rotation().inverse();
  GaussianState out = rotated;
  out.mean = t * rotated.mean;
  out.cov = t * rotated.cov * t.transpose();
  return out;
}

void FactoredBipartiteState::validate() const {
  for (double v : {sK2, sX2, sP2, sQ2}) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      throw std::invalid_argument("factored state widths must be non-negative and finite");
    }
  }
}

bool FactoredBipartiteState::is_wigner_valid(double hbar) const {
  validate();
  return pair_bound_ok(sK2, sX2, hbar) && pair_bound_ok(sP2, sQ2, hbar);
}

bool FactoredBipartiteState::degenerate() const {
  return sK2 == 0.0 || sX2 == 0.0 || sP2 == 0.0 || sQ2 == 0.0;
}

FactoredBipartiteState make_epr_state(double c, double sP2, double sQ2) {
  if (!(std::isfinite(c) && c > 0.0)) {
    throw std::invalid_argument("correlation parameter c must be positive");
  }
  if (!(std::isfinite(sP2) && sP2 >= 0.0) || !(std::isfinite(sQ2) && sQ2 >= 0.0)) {
    throw std::invalid_argument("sP2 and sQ2 must be non-negative and finite");
  }
  // sP2 == 0 is the idealized limit; otherwise the (P, Q) pair must be an
  // admissible quantum pair on its own.
  if (sP2 > 0.0 && !pair_bound_ok(sP2, sQ2, 1.0)) {
    throw std::invalid_argument(
        "inadmissible (sP2, sQ2): product below the uncertainty bound");
  }
  FactoredBipartiteState s;
  s.sK2 = c;
  s.sX2 = 1.0 / (4.0 * c);
  s.sP2 = sP2;
  s.sQ2 = sQ2;
  s.units = UnitSystem::dimensionless;
  return s;
}

FactoredBipartiteState widths_from_rotated(const GaussianState& rotated) {
  require_two_modes(rotated, "widths_from_rotated");
  FactoredBipartiteState s;
  s.sK2 = rotated.cov(0, 0);
  s.sX2 = rotated.cov(1, 1);
  s.sP2 = rotated.cov(2, 2);
  s.sQ2 = rotated.cov(3, 3);
  s.units = rotated.units;
  s.validate();
  return s;
}

GaussianState to_two_mode_state(const FactoredBipartiteState& state) {
  state.validate();
  GaussianState rotated;
  rotated.units = state.units;
  rotated.mean = Eigen::Vector4d::Zero();
  rotated.cov = Eigen::Vector4d(state.sK2, state.sX2, state.sP2, state.sQ2).asDiagonal();
  return rotate_from_epr(rotated);
}

std::string to_string(Separability verdict) {
  return verdict == Separability::separable ? "separable" : "entangled";
}

bool ph_condition(const FactoredBipartiteState& state, double hbar) {
  state.validate();
  return pair_bound_ok(state.sX2, state.sP2, hbar) &&
         pair_bound_ok(state.sQ2, state.sK2, hbar);
}

Separability ph_interchange_test(const FactoredBipartiteState& state, double hbar) {
  if (!state.is_wigner_valid(hbar)) {
    throw std::invalid_argument(
        "interchange test requires an admissible Wigner state");
  }
  return ph_condition(state, hbar) ? Separability::separable
                                   : Separability::entangled;
}

double duan_lhs(const FactoredBipartiteState& state) {
  state.validate();
  require_dimensionless(state.units, "duan_lhs");
  return state.sX2 + 4.0 * state.sP2;
}

double duan_mirror_lhs(const FactoredBipartiteState& state) {
  state.validate();
  require_dimensionless(state.units, "duan_mirror_lhs");
  return state.sQ2 + 4.0 * state.sK2;
}

std::pair<double, double> duan_optimized_pair(const FactoredBipartiteState& state) {
  state.validate();
  require_dimensionless(state.units, "duan_optimized_pair");
  return {4.0 * std::sqrt(state.sX2 * state.sP2),
          4.0 * std::sqrt(state.sQ2 * state.sK2)};
}

CriterionReport criterion_report(const FactoredBipartiteState& state, double hbar) {
  CriterionReport r;
  r.wigner_valid = state.is_wigner_valid(hbar);
  r.ph_separable = ph_condition(state, hbar);
  r.duan_lhs = state.sX2 + 4.0 * state.sP2;
  r.duan_mirror_lhs = state.sQ2 + 4.0 * state.sK2;
  return r;
}

FactoredBipartiteState evolve_factored_pairs(const FactoredBipartiteState& state,
                                             double t, double effective_mass,
                                             double diffusion) {
  state.validate();
  if (!(std::isfinite(t) && t >= 0.0)) {
    throw std::invalid_argument("time must be non-negative and finite");
  }
  if (!(effective_mass > 0.0) || !(diffusion > 0.0)) {
    throw std::invalid_argument("effective mass and diffusion must be positive");
  }
  const double m2 = effective_mass * effective_mass;
  const double cubic = (2.0 / 3.0) * diffusion * t * t * t / m2;
  const double drift = t * t / m2;
  FactoredBipartiteState out = state;
  out.sK2 = 2.0 * diffusion * t + state.sK2;
  out.sX2 = cubic + state.sK2 * drift + state.sX2;
  out.sP2 = 2.0 * diffusion * t + state.sP2;
  out.sQ2 = cubic + state.sP2 * drift + state.sQ2;
  return out;
}

FactoredBipartiteState evolve_epr(const FactoredBipartiteState& state, double t_bar) {
  require_dimensionless(state.units, "evolve_epr");
  return evolve_factored_pairs(state, t_bar, 0.5, 1.0);
}

GaussianState evolve_bipartite(const GaussianState& two_mode, double t,
                               const PhysicalParams& params) {
  require_two_modes(two_mode, "evolve_bipartite");
  params.validate();
  if (!(std::isfinite(t) && t >= 0.0)) {
    throw std::invalid_argument("time must be non-negative and finite");
  }
  const Eigen::Matrix2d s = drift_shear(t, params);
  Eigen::Matrix4d s2 = Eigen::Matrix4d::Zero();
  s2.block<2, 2>(0, 0) = s;
  s2.block<2, 2>(2, 2) = s;
  const Eigen::Matrix2d a = noise_matrix(t, params).matrix();
  GaussianState out = two_mode;
  out.mean = s2 * two_mode.mean;
  out.cov = s2 * two_mode.cov * s2.transpose();
  out.cov.block<2, 2>(0, 0) += a;
  out.cov.block<2, 2>(2, 2) += a;
  return out;
}

CovarianceMatrix2 a_quarter(double s) {
  if (!(std::isfinite(s) && s > 0.0)) {
    throw std::invalid_argument("squeezing parameter s must be positive");
  }
  return {s, 1.0 / (2.0 * s), 0.5};
}

namespace {

SeparationCertificate certificate_core(double t_bar, double s) {
  if (!(std::isfinite(t_bar) && t_bar >= 0.0)) {
    throw std::invalid_argument("certificate time must be non-negative and finite");
  }
  const CovarianceMatrix2 aq = a_quarter(s);
  const CovarianceMatrix2 a = noise_matrix(t_bar, PhysicalParams::dimensionless());
  SeparationCertificate cert;
  cert.t_bar = t_bar;
  cert.s = s;
  cert.b = a - aq;
  cert.det_b = cert.b.det();
  cert.positive_definite = cert.b.spp > 0.0 && cert.b.sxx > 0.0 && cert.det_b > 0.0;
  cert.valid = cert.positive_definite && cert.det_b >= 0.25 - kPsdTol;
  return cert;
}

}  // namespace

SeparationCertificate separation_certificate(double t_bar, double s) {
  return certificate_core(t_bar, s);
}

SeparationCertificate separation_certificate(double t_bar, double s,
                                             const GaussianState& two_mode) {
  require_two_modes(two_mode, "separation_certificate");
  require_dimensionless(two_mode.units, "separation_certificate");
  SeparationCertificate cert = certificate_core(t_bar, s);
  const Eigen::Matrix2d sh = drift_shear(t_bar, PhysicalParams::dimensionless());
  const Eigen::Matrix2d c0 = two_mode.cov.block<2, 2>(0, 0);
  cert.smeared_cov = CovarianceMatrix2::from_matrix(
      sh * c0 * sh.transpose() + a_quarter(s).matrix());
  return cert;
}

GaussianState reduce_to_one_particle(const SeparationCertificate& cert,
                                     const GaussianState& two_mode) {
  if (!cert.valid) {
    throw std::invalid_argument(
        "reduce_to_one_particle requires a valid certificate");
  }
  require_two_modes(two_mode, "reduce_to_one_particle");
  require_dimensionless(two_mode.units, "reduce_to_one_particle");
  const Eigen::Matrix2d sh = drift_shear(cert.t_bar, PhysicalParams::dimensionless());
  GaussianState marginal;
  marginal.units = UnitSystem::dimensionless;
  marginal.mean = sh * two_mode.mean.head<2>();
  marginal.cov = sh * two_mode.cov.block<2, 2>(0, 0) * sh.transpose() +
                 a_quarter(cert.s).matrix() + cert.b.matrix();
  marginal.validate();
  return marginal;
}

}  // namespace phasesep
