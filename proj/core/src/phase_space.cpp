#include "phasesep/phase_space.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phasesep {

namespace {

bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  return m.allFinite();
}

}  // namespace

std::string to_string(UnitSystem units) {
  switch (units) {
    case UnitSystem::dimensionless:
      return "dimensionless";
    case UnitSystem::si:
      return "si";
  }
  throw std::invalid_argument("unknown unit system tag");
}

UnitSystem unit_system_from_string(const std::string& name) {
  if (name == "dimensionless") return UnitSystem::dimensionless;
  if (name == "si") return UnitSystem::si;
  throw std::invalid_argument("unknown unit system '" + name +
                              "' (expected 'dimensionless' or 'si')");
}

bool CovarianceMatrix2::is_psd(double tol) const {
  if (!(std::isfinite(spp) && std::isfinite(sxx) && std::isfinite(spx))) {
    return false;
  }
  return spp >= -tol && sxx >= -tol && det() >= -tol * std::max(1.0, spp * sxx);
}

Eigen::Matrix2d CovarianceMatrix2::matrix() const {
  Eigen::Matrix2d m;
  m << spp, spx, spx, sxx;
  return m;
}

CovarianceMatrix2 CovarianceMatrix2::from_matrix(const Eigen::Matrix2d& m,
                                                 double symmetry_tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (std::abs(m(0, 1) - m(1, 0)) > symmetry_tol * scale) {
    throw std::invalid_argument("covariance matrix is not symmetric");
  }
  return {m(0, 0), m(1, 1), 0.5 * (m(0, 1) + m(1, 0))};
}

void PhysicalParams::validate() const {
  if (!(std::isfinite(hbar) && hbar > 0.0)) {
    throw std::invalid_argument("hbar must be positive and finite");
  }
  if (!(std::isfinite(mass) && mass > 0.0)) {
    throw std::invalid_argument("mass must be positive and finite");
  }
  if (!(std::isfinite(diffusion) && diffusion > 0.0)) {
    throw std::invalid_argument("diffusion must be positive and finite");
  }
}

void GaussianState::validate() const {
  const auto n = mean.size();
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("state mean must hold (p, x) pairs");
  }
  if (cov.rows() != n || cov.cols() != n) {
    throw std::invalid_argument("state covariance must be 2n x 2n");
  }
  if (!all_finite(mean) || !all_finite(cov)) {
    throw std::invalid_argument("state contains non-finite entries");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument("state covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov,  Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::invalid_argument("state covariance eigendecomposition failed");
  }
  if (es.eigenvalues().minCoeff() < -kPsdTol * scale) {
    throw std::invalid_argument("state covariance is not positive semi-definite");
  }
}

PhaseSpacePoint GaussianState::mode_mean(int mode) const {
  if (mode < 0 || mode >= modes()) {
    throw std::invalid_argument("mode index out of range");
  }
  return {mean(2 * mode), mean(2 * mode + 1)};
}

CovarianceMatrix2 GaussianState::mode_cov(int mode) const {
  if (mode < 0 || mode >= modes()) {
    throw std::invalid_argument("mode index out of range");
  }
  return CovarianceMatrix2::from_matrix(cov.block<2, 2>(2 * mode, 2 * mode));
}

double GaussianState::density(const Eigen::VectorXd& z) const {
  if (z.size() != mean.size()) {
    throw std::invalid_argument("density point has wrong dimension");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("degenerate covariance: density undefined");
  }
  const Eigen::VectorXd d = z - mean;
  const double quad = d.dot(llt.solve(d));
  const double logdet =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double n = static_cast<double>(modes());
  return std::exp(-0.5 * quad - 0.5 * logdet - n * std::log(2.0 * std::numbers::pi));
}

GaussianState GaussianState::one_mode(const PhaseSpacePoint& mean,
                                      const CovarianceMatrix2& cov,
                                      UnitSystem units) {
  GaussianState s;
  s.units = units;
  s.mean = mean.vec();
  s.cov = cov.matrix();
  s.validate();
  return s;
}

GaussianState GaussianState::product(const GaussianState& a, const GaussianState& b) {
  if (a.units != b.units) {
    throw std::invalid_argument("cannot combine states with different units");
  }
  GaussianState s;
  s.units = a.units;
  const auto na = a.mean.size();
  const auto nb = b.mean.size();
  s.mean.resize(na + nb);
  s.mean << a.mean, b.mean;
  s.cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
  s.cov.topLeftCorner(na, na) = a.cov;
  s.cov.bottomRightCorner(nb, nb) = b.cov;
  s.validate();
  return s;
}

bool wigner_valid(const CovarianceMatrix2& c, double hbar) {
  if (!(std::isfinite(hbar) && hbar > 0.0)) {
    throw std::invalid_argument("hbar must be positive and finite");
  }
  if (!c.is_psd()) {
    throw std::invalid_argument("covariance is not positive semi-definite");
  }
  const double bound = hbar * hbar / 4.0;
  return c.det() >= bound - kPsdTol * std::max(1.0, bound);
}

CovarianceMatrix2 convolve(const CovarianceMatrix2& c, const CovarianceMatrix2& b) {
  if (!c.is_psd() || !b.is_psd()) {
    throw std::invalid_argument("convolve requires positive semi-definite inputs");
  }
  return c + b;
}

GaussianState smear(const GaussianState& state, const CovarianceMatrix2& b) {
  state.validate();
  if (state.modes() != 1) {
    throw std::invalid_argument("smear expects a one-mode state");
  }
  if (!b.is_psd()) {
    throw std::invalid_argument("smearing kernel is not positive semi-definite");
  }
  GaussianState out = state;
  out.cov += b.matrix();
  return out;
}

double overlap(const GaussianState& s1, const GaussianState& s2) {
  s1.validate();
  s2.validate();
  if (s1.modes() != 1 || s2.modes() != 1) {
    throw std::invalid_argument("overlap expects one-mode states");
  }
  if (s1.units != s2.units) {
    throw std::invalid_argument("cannot overlap states with different units");
  }
  const Eigen::Matrix2d sum = s1.cov + s2.cov;
  const double det = sum.determinant();
  if (det <= kPsdTol) {
    throw std::domain_error("overlap undefined: combined covariance is singular");
  }
  const Eigen::Vector2d delta = s1.mean - s2.mean;
  const double quad = delta.dot(sum.inverse() * delta);
  return std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
}

}  // namespace phasesep
