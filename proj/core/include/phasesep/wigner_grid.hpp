#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "phasesep/phase_space.hpp"

namespace phasesep {

using GridArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Uniform rectangular sampling of a one-mode Wigner function on the
/// symmetric window [-p_max, p_max] x [-x_max, x_max].  Row i holds the
/// momentum node p(i), column j the position node x(j); both axes include
/// their endpoints, integrals use trapezoid weights.
struct WignerGrid {
  GridArray values;
  double p_max = 0.0;
  double x_max = 0.0;
  double dt = 0.0;  ///< step size of the last evolution applied, 0 if none

  int np() const { return static_cast<int>(values.rows()); }
  int nx() const { return static_cast<int>(values.cols()); }
  double dp() const { return 2.0 * p_max / (np() - 1); }
  double dx() const { return 2.0 * x_max / (nx() - 1); }
  double p(int i) const { return -p_max + i * dp(); }
  double x(int j) const { return -x_max + j * dx(); }

  /// Trapezoid-rule value of the total integral.
  double integral() const;

  /// Shape/finiteness checks; throws std::invalid_argument on violation.
  void validate() const;
};

/// Plane-wave modulation of a Gaussian component:
///   cos(k . (z - mean) + phase), with k = (kp, kx).
struct FringeMode {
  Eigen::Vector2d wavevector = Eigen::Vector2d::Zero();
  double phase = 0.0;
};

/// One term of a Gaussian mixture: amplitude * g(z - mean; cov), optionally
/// modulated by a fringe.  g is the normalized Gaussian density, so a plain
/// component contributes exactly `amplitude` to the total integral.
/// Amplitudes may be negative (Wigner functions of superpositions are).
struct GaussianComponent {
  double amplitude = 1.0;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  CovarianceMatrix2 cov;
  std::optional<FringeMode> fringe;
};

/// Finite signed mixture of (possibly modulated) Gaussians.  This family is
/// closed under the free-particle dynamics with momentum diffusion, which is
/// what makes it an exact reference for the grid stepper.
struct GaussianMixtureState {
  std::vector<GaussianComponent> components;

  double density(double p, double x) const;
  /// Exact total integral (fringe components contribute
  /// amplitude * exp(-k^T C k / 2) * cos(phase)).
  double integral() const;
  /// Rescales amplitudes so the total integral is 1; throws
  /// std::domain_error when the integral is too small to normalize.
  void normalize();
  void validate() const;
};

/// Even superposition of two coherent wavepackets a distance `separation`
/// apart in position: two positive bumps at x = +-separation/2 plus an
/// oscillatory term at the midpoint with momentum-space fringes of
/// wavevector `separation`.  Widths default to the minimum-uncertainty
/// values sp2 = sx2 = 1/2.  The mixture is normalized.
GaussianMixtureState make_cat_state(double separation, double sp2 = 0.5,
                                    double sx2 = 0.5);

/// Samples a mixture on the given window.  Preconditions: every fringe is
/// resolvable (|kp| < pi/dp, |kx| < pi/dx) and the window is large enough
/// that boundary samples are below 1e-10 of the peak; violations throw
/// std::domain_error.
WignerGrid rasterize(const GaussianMixtureState& state, int np, int nx,
                     double p_max, double x_max);

/// Samples a one-mode Gaussian state (requires non-degenerate covariance).
WignerGrid rasterize(const GaussianState& one_mode, int np, int nx,
                     double p_max, double x_max);

/// One Strang-split step of dW/dt = -(p/m) dW/dx + D d2W/dp2:
/// half drift, momentum diffusion with variance 2 D dt, half drift.
/// The drift substep is an exact per-row shift evaluated by cubic Lagrange
/// interpolation; the diffusion substep convolves columns with a sampled
/// normalized Gaussian kernel.  Throws std::invalid_argument for dt <= 0 and
/// std::domain_error when the kernel is narrower than one cell
/// (sqrt(2 D dt) < dp), i.e. the grid cannot resolve a single step.
[[nodiscard]] WignerGrid step_pde(const WignerGrid& grid, double dt, const PhysicalParams& params);

/// Applies round(t / dt) steps of step_pde with buffer reuse.
[[nodiscard]] WignerGrid evolve_grid(const WignerGrid& grid, double t, double dt,
                       const PhysicalParams& params);

/// Gaussian smoothing of the grid with a separable kernel of variances
/// (sp2, sx2); with the minimum-uncertainty kernel this produces the
/// non-negative smoothed phase-space density of the state.
[[nodiscard]] WignerGrid smear_grid(const WignerGrid& grid, double sp2, double sx2);

struct GridMoments {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();  // (mean_p, mean_x)
  CovarianceMatrix2 cov;
  double mass = 0.0;
};

/// Trapezoid-rule mean and central second moments.  Requires the grid to be
/// normalized to |integral - 1| <= 1e-3 (throws std::domain_error otherwise);
/// moments are divided by the actual mass.
GridMoments moments(const WignerGrid& grid);

/// Magnitude of the Fourier coefficient of W at the given wavevector,
///   | integral W(p, x) exp(-i (kp p + kx x)) dp dx |.
/// Fringe visibility at time t is this amplitude divided by its value at
/// t = 0.  Throws std::domain_error when the wavevector is beyond the grid's
/// Nyquist limit.
double fringe_amplitude(const WignerGrid& grid, const Eigen::Vector2d& wavevector);

/// Exact propagation of a Gaussian mixture: means follow the drift, plain
/// covariances gain the accumulated noise, and each fringe is damped by
///   exp(-(1/2) k'^T [Ct (A + Ct)^{-1} A] k'),  Ct = S C S^T,  k' = S^{-T} k,
/// with its wavevector transported to (A + Ct)^{-1} Ct k'.  The fringe phase
/// is unchanged.  This is the closed-form reference the PDE stepper is
/// validated against.
GaussianMixtureState propagate_exact(const GaussianMixtureState& state, double t,
                                     const PhysicalParams& params);

}  // namespace phasesep
