#include "mfou/kernel.hpp"

#include <cmath>

namespace mfou {

std::vector<double> sample_frak_h(const SimConfig& config, double hurst) {
  validate_or_throw(config);
  const std::size_t n = config.n_points;
  const double dt = config.dt();
  const double prefactor = hurst - 0.5;
  const double power = hurst - 1.5;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    g[i] = prefactor * std::pow(t + config.epsilon, power);
  }
  return g;
}

std::vector<double> sample_frak_h(const SimConfig& config) {
  return sample_frak_h(config, config.hurst);
}

namespace {

// Cell averages of frak_h over [t_i, t_i + dt], from the exact antiderivative
// (t+eps)^(H-1/2). Pointwise sampling of the steep near-origin part would
// bias the kernel's low-frequency content by O(dt * frak_h(0)), which is a
// double-digit percentage of the stationary variance at H far from 1/2; the
// averaged samples make the quadrature of the underlying integral exact
// against piecewise-constant phases (and the DC bin exact).
std::vector<double> cell_averaged_frak_h(const SimConfig& config, double hurst) {
  validate_or_throw(config);
  const std::size_t n = config.n_points;
  const double dt = config.dt();
  const double p = hurst - 0.5;
  std::vector<double> g(n);
  double left = std::pow(config.epsilon, p);
  for (std::size_t i = 0; i < n; ++i) {
    const double right = std::pow(static_cast<double>(i + 1) * dt + config.epsilon, p);
    g[i] = (right - left) / dt;
    left = right;
  }
  return g;
}

}  // namespace

KernelSpectrum kernel_spectrum_fractional(const SimConfig& config) {
  const std::vector<double> g = cell_averaged_frak_h(config, config.hurst);
  Spectrum s = dft(g);
  const double dt = config.dt();
  const double dirac_weight = std::pow(config.epsilon, config.hurst - 0.5);
  for (auto& c : s.coeffs) c = c * dt + dirac_weight;
  return {std::move(s), KernelKind::fractional, config.hurst, config.epsilon, dt};
}

KernelSpectrum kernel_spectrum_h0(const SimConfig& config) {
  const std::vector<double> g = cell_averaged_frak_h(config, 0.0);
  Spectrum s = dft(g);
  const double dt = config.dt();
  const std::complex<double> dc = s.coeffs[0];
  for (auto& c : s.coeffs) c = (c - dc) * dt;
  s.coeffs[0] = 0.0;  // exact, not merely cancelled in floating point
  return {std::move(s), KernelKind::log_h0, 0.0, config.epsilon, dt};
}

KernelSpectrum kernel_spectrum_exponential(const SimConfig& config) {
  validate_or_throw(config);
  const std::size_t n = config.n_points;
  const double dt = config.dt();
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i)
    e[i] = std::exp(-static_cast<double>(i) * dt / config.t_large);
  return {dft(e), KernelKind::exponential, config.hurst, config.epsilon, dt};
}

}  // namespace mfou
