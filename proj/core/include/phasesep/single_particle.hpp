#pragma once

#include <Eigen/Core>

#include "phasesep/phase_space.hpp"

namespace phasesep {

/// Quadratic-form coefficients of the free-particle propagator with momentum
/// diffusion.  The transition kernel from (p0, x0) to (p, x) in time t is a
/// Gaussian in (p - p0, x - x0 - p0 t / m) whose exponent reads
///   -alpha/2 (p-p0)^2 - beta/2 (x - x0 - p0 t/m)^2 - epsilon (p-p0)(x - x0 - p0 t/m)
/// with alpha = 1/(D t), beta = 3 m^2/(D t^3), epsilon = -3 m/(D t^2).
struct PropagatorCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
};

/// Throws std::invalid_argument for t <= 0 (the kernel degenerates to a
/// delta function at t = 0).
PropagatorCoefficients propagator_coefficients(double t, const PhysicalParams& params);

/// Covariance A(t) accumulated by the environmental noise over time t:
///   A = [ 2 D t        D t^2 / m       ]
///       [ D t^2 / m    2 D t^3 / (3 m^2) ]
/// |A(t)| = D^2 t^4 / (3 m^2).  Defined for t >= 0; A(0) = 0.
CovarianceMatrix2 noise_matrix(double t, const PhysicalParams& params);

/// Drift part of the evolution: the shear S = [[1, 0], [t/m, 1]] acting on
/// (p, x), i.e. p -> p, x -> x + p t / m.
Eigen::Matrix2d drift_shear(double t, const PhysicalParams& params);

/// Exact evolution of a one-mode Gaussian state:
///   mean -> S mean,   cov -> S cov S^T + A(t).
/// Component-wise this is
///   cov_pp -> cov_pp + 2 D t
///   cov_xx -> cov_xx + (2 t / m) cov_px + (t^2 / m^2) cov_pp + 2 D t^3 / (3 m^2)
///   cov_px -> cov_px + (t / m) cov_pp + D t^2 / m.
/// Requires t >= 0.  SI-tagged states must use SI params consistently; the
/// closed form itself is unit-covariant, so no rescaling is performed here.
GaussianState evolve(const GaussianState& state, double t, const PhysicalParams& params);

/// Natural scales of the problem: times, momenta and positions measured in
///   t_scale = sqrt(hbar m / D),  p_scale = (hbar m D)^(1/4),
///   x_scale = (hbar^3 / (m D))^(1/4)
/// render the dynamics parameter-free with hbar = m = D = 1.  Note
/// p_scale * x_scale = hbar.
struct DimensionlessScaling {
  double t_scale = 1.0;
  double p_scale = 1.0;
  double x_scale = 1.0;

  static DimensionlessScaling from_params(const PhysicalParams& params);
};

enum class Quantity { time, momentum, position };

/// Scalar conversions between SI-like and dimensionless values.
double to_dimensionless(double value, Quantity kind, const PhysicalParams& params);
double from_dimensionless(double value, Quantity kind, const PhysicalParams& params);

/// Whole-state conversions (mean and covariance rescaled entry-wise,
/// units tag flipped).  Converting a state already in the target units throws.
GaussianState to_dimensionless(const GaussianState& state, const PhysicalParams& params);
GaussianState to_si(const GaussianState& state, const PhysicalParams& params);

}  // namespace phasesep
