#pragma once

#include <Eigen/Core>

#include <string>

namespace phasesep {

/// Unit system tag carried by states and serialized files.  All criteria and
/// thresholds are evaluated in dimensionless form; SI-tagged states are
/// rescaled at the API boundary (see single_particle.hpp).
enum class UnitSystem { dimensionless, si };

std::string to_string(UnitSystem units);
UnitSystem unit_system_from_string(const std::string& name);

/// Absolute tolerance for positive-semi-definiteness and uncertainty-boundary
/// tests.  Boundary states (|C| exactly at the quantum bound) occur by
/// construction throughout, so comparisons carry this slack.
inline constexpr double kPsdTol = 1e-12;

/// A point (p, x) of single-particle phase space.
struct PhaseSpacePoint {
  double p = 0.0;
  double x = 0.0;

  Eigen::Vector2d vec() const { return Eigen::Vector2d(p, x); }
};

/// Symmetric 2x2 covariance of one mode, ordered (p, x):
///   [ spp  spx ]
///   [ spx  sxx ]
struct CovarianceMatrix2 {
  double spp = 0.0;  ///< momentum variance
  double sxx = 0.0;  ///< position variance
  double spx = 0.0;  ///< cross covariance

  double det() const { return spp * sxx - spx * spx; }

  /// Determinant/diagonal test; exact for symmetric 2x2.
  bool is_psd(double tol = kPsdTol) const;

  Eigen::Matrix2d matrix() const;
  static CovarianceMatrix2 from_matrix(const Eigen::Matrix2d& m,
                                       double symmetry_tol = 1e-9);

  CovarianceMatrix2 operator+(const CovarianceMatrix2& o) const {
    return {spp + o.spp, sxx + o.sxx, spx + o.spx};
  }
  CovarianceMatrix2 operator-(const CovarianceMatrix2& o) const {
    return {spp - o.spp, sxx - o.sxx, spx - o.spx};
  }
  CovarianceMatrix2 operator*(double c) const {
    return {c * spp, c * sxx, c * spx};
  }
};

/// Constants of the high-temperature free-particle master equation
///   dW/dt = -(p/m) dW/dx + D d2W/dp2,
/// where D = 2 m gamma k T is the momentum diffusion coefficient.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double diffusion = 1.0;

  /// Throws std::invalid_argument unless every constant is positive and finite.
  void validate() const;

  static PhysicalParams dimensionless() { return PhysicalParams{}; }
};

/// Gaussian Wigner function of n modes with unit total integral,
///   W(z) = exp(-(z-mu)^T C^{-1} (z-mu) / 2) / ((2 pi)^n sqrt(|C|)).
/// The coordinate ordering is (p1, x1, ..., pn, xn); `cov` is 2n x 2n.
struct GaussianState {
  UnitSystem units = UnitSystem::dimensionless;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int modes() const { return static_cast<int>(mean.size()) / 2; }

  /// Dimension, symmetry, finiteness and positive-semi-definiteness checks;
  /// throws std::invalid_argument on violation.
  void validate() const;

  PhaseSpacePoint mode_mean(int mode) const;
  CovarianceMatrix2 mode_cov(int mode) const;

  /// Density value at z; requires strictly positive-definite covariance
  /// (throws std::domain_error for degenerate states).
  double density(const Eigen::VectorXd& z) const;

  static GaussianState one_mode(const PhaseSpacePoint& mean,
                                const CovarianceMatrix2& cov,
                                UnitSystem units = UnitSystem::dimensionless);

  /// Uncorrelated product of two states (block-diagonal covariance).
  static GaussianState product(const GaussianState& a, const GaussianState& b);
};

/// True when C is an admissible single-mode quantum covariance,
/// i.e. |C| >= hbar^2/4 (up to kPsdTol).  Throws std::invalid_argument when
/// C is not positive semi-definite.
bool wigner_valid(const CovarianceMatrix2& c, double hbar = 1.0);

/// Covariance of the convolution of two centered Gaussians: C + B.
/// Both inputs must be positive semi-definite.
CovarianceMatrix2 convolve(const CovarianceMatrix2& c, const CovarianceMatrix2& b);

/// Gaussian smoothing of a one-mode state: mean unchanged, covariance C + B.
/// Smearing with the minimum-uncertainty kernel lifts a Wigner function to a
/// pointwise non-negative (Husimi-type) density.
GaussianState smear(const GaussianState& state, const CovarianceMatrix2& b);

/// Overlap integral of two one-mode Gaussian densities,
///   int W1 W2 = exp(-delta^T (C1+C2)^{-1} delta / 2) / (2 pi sqrt(|C1+C2|)).
/// Throws std::domain_error when C1 + C2 is singular.
double overlap(const GaussianState& s1, const GaussianState& s2);

}  // namespace phasesep
