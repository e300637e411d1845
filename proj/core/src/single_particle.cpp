#include "phasesep/single_particle.hpp"

#include <cmath>
#include <stdexcept>

namespace phasesep {

namespace {

void require_nonnegative_time(double t) {
  if (!(std::isfinite(t) && t >= 0.0)) {
    throw std::invalid_argument("time must be non-negative and finite");
  }
}

/// Per-entry scale factors for a state's (mean, cov) in the given units.
struct StateScales {
  Eigen::VectorXd mean_scale;
  Eigen::MatrixXd cov_scale;
};

StateScales state_scales(const GaussianState& state, const DimensionlessScaling& s) {
  const auto n = state.mean.size();
  StateScales out;
  out.mean_scale.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.mean_scale(i) = (i % 2 == 0) ? s.p_scale : s.x_scale;
  }
  out.cov_scale = out.mean_scale * out.mean_scale.transpose();
  return out;
}

}  // namespace

PropagatorCoefficients propagator_coefficients(double t, const PhysicalParams& params) {
  params.validate();
  if (!(std::isfinite(t) && t > 0.0)) {
    throw std::invalid_argument("propagator coefficients require t > 0");
  }
  const double d = params.diffusion;
  const double m = params.mass;
  return {1.0 / (d * t), 3.0 * m * m / (d * t * t * t), -3.0 * m / (d * t * t)};
}

CovarianceMatrix2 noise_matrix(double t, const PhysicalParams& params) {
  params.validate();
  require_nonnegative_time(t);
  const double d = params.diffusion;
  const double m = params.mass;
  return {2.0 * d * t, 2.0 * d * t * t * t / (3.0 * m * m), d * t * t / m};
}

Eigen::Matrix2d drift_shear(double t, const PhysicalParams& params) {
  params.validate();
  require_nonnegative_time(t);
  Eigen::Matrix2d s;
  s << 1.0, 0.0, t / params.mass, 1.0;
  return s;
}

GaussianState evolve(const GaussianState& state, double t, const PhysicalParams& params) {
  params.validate();
  require_nonnegative_time(t);
  state.validate();
  if (state.modes() != 1) {
    throw std::invalid_argument("evolve expects a one-mode state");
  }
  const Eigen::Matrix2d s = drift_shear(t, params);
  GaussianState out = state;
  out.mean = s * state.mean;
  out.cov = s * state.cov * s.transpose() + noise_matrix(t, params).matrix();
  return out;
}

DimensionlessScaling DimensionlessScaling::from_params(const PhysicalParams& params) {
  params.validate();
  DimensionlessScaling s;
  s.t_scale = std::sqrt(params.hbar * params.mass / params.diffusion);
  s.p_scale = std::pow(params.hbar * params.mass * params.diffusion, 0.25);
  s.x_scale = std::pow(params.hbar * params.hbar * params.hbar /
                           (params.mass * params.diffusion),
                       0.25);
  return s;
}

namespace {

double scale_for(Quantity kind, const DimensionlessScaling& s) {
  switch (kind) {
    case Quantity::time:
      return s.t_scale;
    case Quantity::momentum:
      return s.p_scale;
    case Quantity::position:
      return s.x_scale;
  }
  throw std::invalid_argument("unknown quantity kind");
}

}  // namespace

double to_dimensionless(double value, Quantity kind, const PhysicalParams& params) {
  return value / scale_for(kind, DimensionlessScaling::from_params(params));
}

double from_dimensionless(double value, Quantity kind, const PhysicalParams& params) {
  return value * scale_for(kind, DimensionlessScaling::from_params(params));
}

GaussianState to_dimensionless(const GaussianState& state, const PhysicalParams& params) {
  state.validate();
  if (state.units == UnitSystem::dimensionless) {
    throw std::invalid_argument("state is already dimensionless");
  }
  const auto scales = state_scales(state, DimensionlessScaling::from_params(params));
  GaussianState out = state;
  out.units = UnitSystem::dimensionless;
  out.mean = state.mean.cwiseQuotient(scales.mean_scale);
  out.cov = state.cov.cwiseQuotient(scales.cov_scale);
  return out;
}

GaussianState to_si(const GaussianState& state, const PhysicalParams& params) {
  state.validate();
  if (state.units == UnitSystem::si) {
    throw std::invalid_argument("state is already in SI units");
  }
  const auto scales = state_scales(state, DimensionlessScaling::from_params(params));
  GaussianState out = state;
  out.units = UnitSystem::si;
  out.mean = state.mean.cwiseProduct(scales.mean_scale);
  out.cov = state.cov.cwiseProduct(scales.cov_scale);
  return out;
}

}  // namespace phasesep
