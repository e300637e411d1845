#include "phasesep/wigner_grid.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "phasesep/single_particle.hpp"

namespace phasesep {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_grid_shape(int np, int nx) {
  if (np < 8 || nx < 8) {
    throw std::invalid_argument("grid needs at least 8 nodes per axis");
  }
}

Eigen::VectorXd trapezoid_weights(int n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  w(0) = 0.5 * h;
  w(n - 1) = 0.5 * h;
  return w;
}

/// Sampled, renormalized Gaussian kernel with taps at multiples of `h`
/// covering 8 standard deviations.  Renormalization keeps the convolution
/// exactly mass-preserving; the sampling bias of the kernel's variance is
/// O(exp(-2 pi^2 sigma^2 / h^2)) and negligible once sigma >= h.
std::vector<double> sampled_gaussian_kernel(double variance, double h, int max_radius) {
  const double sigma = std::sqrt(variance);
  int radius = static_cast<int>(std::ceil(8.0 * sigma / h));
  radius = std::max(1, std::min(radius, max_radius));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int r = -radius; r <= radius; ++r) {
    const double u = r * h;
    k[r + radius] = std::exp(-0.5 * u * u / variance);
    sum += k[r + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

/// In-place row convolution (along the momentum axis) with the given kernel.
void convolve_rows(GridArray& v, const std::vector<double>& kernel, GridArray& scratch) {
  const int np = static_cast<int>(v.rows());
  const int nx = static_cast<int>(v.cols());
  const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
  scratch.setZero(np, nx);
  for (int r = -radius; r <= radius; ++r) {
    const double w = kernel[r + radius];
    const int dst0 = std::max(0, r);
    const int src0 = std::max(0, -r);
    const int len = np - std::abs(r);
    if (len <= 0) continue;
    scratch.block(dst0, 0, len, nx) += w * v.block(src0, 0, len, nx);
  }
  v.swap(scratch);
}

/// In-place column convolution (along the position axis).
void convolve_cols(GridArray& v, const std::vector<double>& kernel, GridArray& scratch) {
  const int np = static_cast<int>(v.rows());
  const int nx = static_cast<int>(v.cols());
  const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
  scratch.setZero(np, nx);
  for (int r = -radius; r <= radius; ++r) {
    const double w = kernel[r + radius];
    const int dst0 = std::max(0, r);
    const int src0 = std::max(0, -r);
    const int len = nx - std::abs(r);
    if (len <= 0) continue;
    scratch.block(0, dst0, np, len) += w * v.block(0, src0, np, len);
  }
  v.swap(scratch);
}

/// Exact drift substep: row i is shifted in x by p(i) * dt / m, evaluated by
/// cubic Lagrange interpolation.  The shift is uniform within a row, so the
/// four interpolation weights are fixed per row and sum to one, making the
/// substep mass-preserving up to the (zero) boundary values.
void shear_rows(WignerGrid& grid, double dt, double mass, std::vector<double>& row_buf) {
  const int np = grid.np();
  const int nx = grid.nx();
  const double dxi = 1.0 / grid.dx();
  row_buf.resize(static_cast<std::size_t>(nx));
  for (int i = 0; i < np; ++i) {
    const double shift_cells = grid.p(i) * dt / mass * dxi;
    if (shift_cells == 0.0) continue;
    // source position for output column j is j - shift_cells = (j + q) + f
    const double neg = -shift_cells;
    const double qf = std::floor(neg);
    const int q = static_cast<int>(qf);
    const double f = neg - qf;
    const double wm1 = -f * (f - 1.0) * (f - 2.0) / 6.0;
    const double w0 = (f * f - 1.0) * (f - 2.0) / 2.0;
    const double w1 = -f * (f + 1.0) * (f - 2.0) / 2.0;
    const double w2 = f * (f * f - 1.0) / 6.0;
    const double* grid_row = grid.values.data() + static_cast<std::ptrdiff_t>(i) * nx;
    std::copy(grid_row, grid_row + nx, row_buf.begin());
    const double* in = row_buf.data();
    double* out = grid.values.data() + static_cast<std::ptrdiff_t>(i) * nx;
    auto sample = [&](int idx) { return (idx >= 0 && idx < nx) ? in[idx] : 0.0; };
    // interior columns where all four taps are in range
    const int j_lo = std::max(0, 1 - q);
    const int j_hi = std::min(nx, nx - q - 2);
    for (int j = 0; j < std::min(j_lo, nx); ++j) {
      out[j] = wm1 * sample(j + q - 1) + w0 * sample(j + q) +
               w1 * sample(j + q + 1) + w2 * sample(j + q + 2);
    }
    for (int j = j_lo; j < j_hi; ++j) {
      const double* s = in + j + q;
      out[j] = wm1 * s[-1] + w0 * s[0] + w1 * s[1] + w2 * s[2];
    }
    for (int j = std::max(j_hi, 0); j < nx; ++j) {
      out[j] = wm1 * sample(j + q - 1) + w0 * sample(j + q) +
               w1 * sample(j + q + 1) + w2 * sample(j + q + 2);
    }
  }
}

void step_in_place(WignerGrid& grid, double dt, const PhysicalParams& params,
                   GridArray& scratch, std::vector<double>& row_buf) {
  const double variance = 2.0 * params.diffusion * dt;
  if (std::sqrt(variance) < grid.dp()) {
    throw std::domain_error(
        "grid too coarse for this step: diffusion kernel width sqrt(2 D dt) is "
        "below one momentum cell; increase dt or refine the momentum axis");
  }
  const auto kernel = sampled_gaussian_kernel(variance, grid.dp(), grid.np() - 1);
  shear_rows(grid, 0.5 * dt, params.mass, row_buf);
  convolve_rows(grid.values, kernel, scratch);
  shear_rows(grid, 0.5 * dt, params.mass, row_buf);
  grid.dt = dt;
}

}  // namespace

double WignerGrid::integral() const {
  const Eigen::VectorXd wp = trapezoid_weights(np(), dp());
  const Eigen::VectorXd wx = trapezoid_weights(nx(), dx());
  return wp.dot(values.matrix() * wx);
}

void WignerGrid::validate() const {
  require_grid_shape(np(), nx());
  if (!(std::isfinite(p_max) && p_max > 0.0 && std::isfinite(x_max) && x_max > 0.0)) {
    throw std::invalid_argument("grid bounds must be positive and finite");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("grid contains non-finite values");
  }
}

double GaussianMixtureState::density(double p, double x) const {
  double total = 0.0;
  for (const auto& c : components) {
    const double det = c.cov.det();
    const double dp_ = p - c.mean(0);
    const double dx_ = x - c.mean(1);
    // inverse covariance entries
    const double ipp = c.cov.sxx / det;
    const double ixx = c.cov.spp / det;
    const double ipx = -c.cov.spx / det;
    const double quad = 0.5 * (ipp * dp_ * dp_ + 2.0 * ipx * dp_ * dx_ + ixx * dx_ * dx_);
    double g = c.amplitude * std::exp(-quad) / (kTwoPi * std::sqrt(det));
    if (c.fringe) {
      g *= std::cos(c.fringe->wavevector(0) * dp_ + c.fringe->wavevector(1) * dx_ +
                    c.fringe->phase);
    }
    total += g;
  }
  return total;
}

double GaussianMixtureState::integral() const {
  double total = 0.0;
  for (const auto& c : components) {
    if (c.fringe) {
      const Eigen::Vector2d& k = c.fringe->wavevector;
      const double kck = k.dot(c.cov.matrix() * k);
      total += c.amplitude * std::exp(-0.5 * kck) * std::cos(c.fringe->phase);
    } else {
      total += c.amplitude;
    }
  }
  return total;
}

void GaussianMixtureState::normalize() {
  const double total = integral();
  if (std::abs(total) < 1e-12) {
    throw std::domain_error("mixture integral too small to normalize");
  }
  for (auto& c : components) c.amplitude /= total;
}

void GaussianMixtureState::validate() const {
  if (components.empty()) {
    throw std::invalid_argument("mixture has no components");
  }
  for (const auto& c : components) {
    if (!std::isfinite(c.amplitude)) {
      throw std::invalid_argument("component amplitude must be finite");
    }
    if (!c.mean.allFinite()) {
      throw std::invalid_argument("component mean must be finite");
    }
    if (!c.cov.is_psd() || c.cov.det() <= kPsdTol) {
      throw std::invalid_argument("component covariance must be positive definite");
    }
    if (c.fringe && (!c.fringe->wavevector.allFinite() || !std::isfinite(c.fringe->phase))) {
      throw std::invalid_argument("fringe parameters must be finite");
    }
  }
}

GaussianMixtureState make_cat_state(double separation, double sp2, double sx2) {
  if (!(std::isfinite(separation) && separation > 0.0)) {
    throw std::invalid_argument("cat separation must be positive");
  }
  if (!(sp2 > 0.0 && sx2 > 0.0)) {
    throw std::invalid_argument("cat widths must be positive");
  }
  const CovarianceMatrix2 cov{sp2, sx2, 0.0};
  const double weight = 1.0 / (2.0 * (1.0 + std::exp(-0.5 * sp2 * separation * separation)));
  GaussianMixtureState cat;
  cat.components.resize(3);
  cat.components[0] = {weight, {0.0, 0.5 * separation}, cov, std::nullopt};
  cat.components[1] = {weight, {0.0, -0.5 * separation}, cov, std::nullopt};
  cat.components[2] = {2.0 * weight, {0.0, 0.0}, cov,
                       FringeMode{Eigen::Vector2d(separation, 0.0), 0.0}};
  cat.validate();
  return cat;
}

WignerGrid rasterize(const GaussianMixtureState& state, int np, int nx,
                     double p_max, double x_max) {
  state.validate();
  require_grid_shape(np, nx);
  if (!(p_max > 0.0 && x_max > 0.0)) {
    throw std::invalid_argument("grid bounds must be positive");
  }
  WignerGrid grid;
  grid.p_max = p_max;
  grid.x_max = x_max;
  grid.values.resize(np, nx);
  for (const auto& c : state.components) {
    if (!c.fringe) continue;
    const double kp = std::abs(c.fringe->wavevector(0));
    const double kx = std::abs(c.fringe->wavevector(1));
    if (kp > std::numbers::pi / grid.dp() || kx > std::numbers::pi / grid.dx()) {
      throw std::domain_error(
          "fringe wavevector beyond the grid Nyquist limit; refine the grid");
    }
  }
  for (int i = 0; i < np; ++i) {
    const double p = grid.p(i);
    for (int j = 0; j < nx; ++j) {
      grid.values(i, j) = state.density(p, grid.x(j));
    }
  }
  const double peak = grid.values.abs().maxCoeff();
  if (peak <= 0.0) {
    throw std::domain_error("rasterized state vanishes on the grid window");
  }
  const double edge = std::max(
      std::max(grid.values.row(0).abs().maxCoeff(), grid.values.row(np - 1).abs().maxCoeff()),
      std::max(grid.values.col(0).abs().maxCoeff(), grid.values.col(nx - 1).abs().maxCoeff()));
  if (edge > 1e-10 * peak) {
    throw std::domain_error(
        "grid window too small: boundary samples exceed 1e-10 of the peak");
  }
  return grid;
}

WignerGrid rasterize(const GaussianState& one_mode, int np, int nx,
                     double p_max, double x_max) {
  one_mode.validate();
  if (one_mode.modes() != 1) {
    throw std::invalid_argument("rasterize expects a one-mode state");
  }
  GaussianMixtureState mixture;
  GaussianComponent comp;
  comp.amplitude = 1.0;
  comp.mean = one_mode.mean;
  comp.cov = one_mode.mode_cov(0);
  mixture.components.push_back(comp);
  return rasterize(mixture, np, nx, p_max, x_max);
}

WignerGrid step_pde(const WignerGrid& grid, double dt, const PhysicalParams& params) {
  grid.validate();
  params.validate();
  if (!(std::isfinite(dt) && dt > 0.0)) {
    throw std::invalid_argument("step size dt must be positive and finite");
  }
  WignerGrid out = grid;
  GridArray scratch;
  std::vector<double> row_buf;
  step_in_place(out, dt, params, scratch, row_buf);
  return out;
}

WignerGrid evolve_grid(const WignerGrid& grid, double t, double dt,
                       const PhysicalParams& params) {
  grid.validate();
  params.validate();
  if (!(std::isfinite(dt) && dt > 0.0)) {
    throw std::invalid_argument("step size dt must be positive and finite");
  }
  if (!(std::isfinite(t) && t >= 0.0)) {
    throw std::invalid_argument("evolution time must be non-negative and finite");
  }
  const long n = std::lround(t / dt);
  if (std::abs(static_cast<double>(n) * dt - t) > 1e-6 * dt) {
    throw std::invalid_argument("evolution time must be an integer number of steps");
  }
  WignerGrid out = grid;
  GridArray scratch;
  std::vector<double> row_buf;
  for (long k = 0; k < n; ++k) {
    step_in_place(out, dt, params, scratch, row_buf);
  }
  return out;
}

WignerGrid smear_grid(const WignerGrid& grid, double sp2, double sx2) {
  grid.validate();
  if (!(sp2 > 0.0 && sx2 > 0.0)) {
    throw std::invalid_argument("smearing variances must be positive");
  }
  if (std::sqrt(sp2) < grid.dp() || std::sqrt(sx2) < grid.dx()) {
    throw std::domain_error("smearing kernel narrower than one grid cell");
  }
  WignerGrid out = grid;
  GridArray scratch;
  const auto kp = sampled_gaussian_kernel(sp2, grid.dp(), grid.np() - 1);
  const auto kx = sampled_gaussian_kernel(sx2, grid.dx(), grid.nx() - 1);
  convolve_rows(out.values, kp, scratch);
  convolve_cols(out.values, kx, scratch);
  return out;
}

GridMoments moments(const WignerGrid& grid) {
  grid.validate();
  const int np = grid.np();
  const int nx = grid.nx();
  const Eigen::VectorXd wp = trapezoid_weights(np, grid.dp());
  const Eigen::VectorXd wx = trapezoid_weights(nx, grid.dx());
  const Eigen::VectorXd p_nodes =
      Eigen::VectorXd::LinSpaced(np, -grid.p_max, grid.p_max);
  const Eigen::VectorXd x_nodes =
      Eigen::VectorXd::LinSpaced(nx, -grid.x_max, grid.x_max);

  const Eigen::VectorXd row_int = grid.values.matrix() * wx;   // per-momentum mass
  const Eigen::VectorXd col_int = grid.values.matrix().transpose() * wp;

  GridMoments m;
  m.mass = wp.dot(row_int);
  if (std::abs(m.mass - 1.0) > 1e-3) {
    throw std::domain_error("grid is not normalized: moments require the total "
                            "integral within 1e-3 of one");
  }
  const double mean_p = wp.cwiseProduct(p_nodes).dot(row_int) / m.mass;
  const double mean_x = wx.cwiseProduct(x_nodes).dot(col_int) / m.mass;
  m.mean = Eigen::Vector2d(mean_p, mean_x);

  const Eigen::VectorXd dp_c = p_nodes.array() - mean_p;
  const Eigen::VectorXd dx_c = x_nodes.array() - mean_x;
  m.cov.spp = wp.cwiseProduct(dp_c.cwiseAbs2()).dot(row_int) / m.mass;
  m.cov.sxx = wx.cwiseProduct(dx_c.cwiseAbs2()).dot(col_int) / m.mass;
  m.cov.spx = wp.cwiseProduct(dp_c).dot(grid.values.matrix() * wx.cwiseProduct(dx_c)) / m.mass;
  return m;
}

double fringe_amplitude(const WignerGrid& grid, const Eigen::Vector2d& wavevector) {
  grid.validate();
  if (!wavevector.allFinite()) {
    throw std::invalid_argument("wavevector must be finite");
  }
  const double kp = wavevector(0);
  const double kx = wavevector(1);
  if (std::abs(kp) > std::numbers::pi / grid.dp() ||
      std::abs(kx) > std::numbers::pi / grid.dx()) {
    throw std::domain_error("wavevector beyond the grid Nyquist limit");
  }
  const int np = grid.np();
  const int nx = grid.nx();
  const Eigen::VectorXd wp = trapezoid_weights(np, grid.dp());
  const Eigen::VectorXd wx = trapezoid_weights(nx, grid.dx());
  Eigen::VectorXd cx(nx);
  Eigen::VectorXd sx(nx);
  for (int j = 0; j < nx; ++j) {
    cx(j) = std::cos(kx * grid.x(j)) * wx(j);
    sx(j) = std::sin(kx * grid.x(j)) * wx(j);
  }
  const Eigen::VectorXd re_rows = grid.values.matrix() * cx;
  const Eigen::VectorXd im_rows = -(grid.values.matrix() * sx);
  double re = 0.0;
  double im = 0.0;
  for (int i = 0; i < np; ++i) {
    const double c = std::cos(kp * grid.p(i));
    const double s = std::sin(kp * grid.p(i));
    re += wp(i) * (c * re_rows(i) + s * im_rows(i));
    im += wp(i) * (c * im_rows(i) - s * re_rows(i));
  }
  return std::hypot(re, im);
}

GaussianMixtureState propagate_exact(const GaussianMixtureState& state, double t,
                                     const PhysicalParams& params) {
  state.validate();
  params.validate();
  if (!(std::isfinite(t) && t >= 0.0)) {
    throw std::invalid_argument("time must be non-negative and finite");
  }
  const Eigen::Matrix2d s = drift_shear(t, params);
  const Eigen::Matrix2d a = noise_matrix(t, params).matrix();
  Eigen::Matrix2d s_inv_t;  // S^{-T}
  s_inv_t << 1.0, -t / params.mass, 0.0, 1.0;

  GaussianMixtureState out = state;
  for (auto& c : out.components) {
    const Eigen::Matrix2d ct = s * c.cov.matrix() * s.transpose();
    const Eigen::Matrix2d cov_new = ct + a;
    c.mean = s * c.mean;
    c.cov = CovarianceMatrix2::from_matrix(cov_new);
    if (c.fringe) {
      const Eigen::Vector2d k_drift = s_inv_t * c.fringe->wavevector;
      Eigen::LLT<Eigen::Matrix2d> llt(cov_new);
      if (llt.info() != Eigen::Success) {
        throw std::domain_error("degenerate evolved covariance in fringe update");
      }
      // damping exponent k^T Ct (Ct + A)^{-1} A k / 2, evaluated without
      // inverting the (singular at t = 0) noise matrix
      const Eigen::Vector2d ct_k = ct * k_drift;
      const Eigen::Vector2d a_k = a * k_drift;
      const double exponent = 0.5 * ct_k.dot(llt.solve(a_k));
      c.amplitude *= std::exp(-exponent);
      c.fringe->wavevector = llt.solve(ct_k);
    }
  }
  return out;
}

}  // namespace phasesep
