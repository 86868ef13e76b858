#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mfou/config.hpp"
#include "mfou/quadrature.hpp"

namespace mfou {

/// Value plus a positive absolute error estimate from quadrature.
struct QuadValue {
  double value = 0.0;
  double error = 0.0;
};

/// Stationary variance of the fOU process: T^2H * Gamma(H+1/2)^2 / (2 sin(pi H)).
double fou_variance(double hurst, double t_large);

/// Covariance from the time-domain integral representation (semi-infinite
/// integral with an h^(2H-1) endpoint singularity).
QuadValue fou_covariance_time(double hurst, double t_large, double tau);

/// Covariance from the spectral representation (cosine transform of the
/// fractional OU spectrum), evaluated by oscillatory quadrature.
QuadValue fou_covariance_spectral(double hurst, double t_large, double tau);

/// H = 0 covariance; diverges at tau = 0 (domain error).
QuadValue xtilde_covariance(double t_large, double tau);

/// Bounded remainder g(tau) = xtilde_covariance(tau) - ln+(T/tau).
QuadValue g_function(double t_large, double tau);

/// integral of ln(h) e^(-h) over (0, inf), i.e. minus the Euler-Mascheroni
/// constant, evaluated by quadrature.
double g_at_zero();

/// Second-moment amplitude, closed form: T^2H Gamma(H+1/2)^2/(sin(pi H) Gamma(2H+1)).
double c2_closed(double hurst, double t_large);

/// Same amplitude via the integral of the squared kernel bracket.
QuadValue c2_integral(double hurst, double t_large);

/// Fourth-moment amplitude at H = 1/2, closed form:
/// T^2 e^(4 gamma_sq g(0)) / ((1-4 gamma_sq)(1-2 gamma_sq)).
double c4_half_closed(double gamma_sq, double t_large);

/// 2n-th moment amplitude c_{H,gamma,2n} by n-dimensional integration:
/// nested adaptive quadrature for n <= 2, importance-sampled Monte Carlo
/// for n = 3. Requires gamma_sq < min(1/4, hurst/(n-1)).
QuadValue c2n_quadrature(double hurst, double gamma_sq, int n, double t_large,
                         std::uint64_t mc_seed = 0x6d666f75u);

/// Asymptotic 2n-th structure function prediction
/// c_{H,gamma,2n} * (2n)!/(2^n n!) * (tau/T)^(2nH - 2n(n-1) gamma_sq).
double s2n_prediction(double hurst, double gamma_sq, int n, double t_large, double tau);

/// Flatness prediction (c4/c2^2) * (tau/T)^(-4 gamma_sq).
double flatness_prediction(double hurst, double gamma_sq, double t_large, double tau);

/// n-point chaos correlator
/// T^(2n(n-1) gamma_sq) * prod_{i<j} e^(4 gamma_sq g(u_i-u_j)) / |u_i-u_j|_+^(4 gamma_sq).
double chaos_correlator(std::span<const double> points, double gamma_sq, double t_large,
                        int n);

struct TheoryReport {
  double variance = 0.0;
  std::vector<std::pair<double, QuadValue>> covariance_samples;  // (tau, value)
  double c2 = 0.0;
  QuadValue c4;
  std::map<int, QuadValue> c2n;                          // order 2n -> amplitude
  std::map<int, std::pair<double, double>> s2n_scaling;  // order -> (exponent, amplitude)
  double flatness_exponent = 0.0;
  double flatness_amplitude = 0.0;
};

/// Evaluates every prediction relevant to the given configuration; orders
/// are even moment orders (2, 4, ...), each checked against the existence
/// range before evaluation.
TheoryReport make_theory_report(const SimConfig& config, std::span<const int> orders);

}  // namespace mfou
