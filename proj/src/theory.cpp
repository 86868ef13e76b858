#include "mfou/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mfou/noise.hpp"

namespace mfou {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_hurst(double hurst, const char* who) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::domain_error(std::string(who) + ": hurst outside (0,1)");
}

// Squared kernel bracket b(u)^2 with
// b(u) = (1-u)^(H-1/2) 1_{u<=1} - (-u)^(H-1/2) 1_{u<=0}.
double bracket_sq(double u, double hurst) {
  const double p = hurst - 0.5;
  double b = 0.0;
  if (u <= 1.0) b += std::pow(1.0 - u, p);
  if (u <= 0.0) b -= std::pow(-u, p);
  return b * b;
}

// Integral of b(u)^2 F(u) du over (-inf, 1], with the three endpoint
// singularities (u -> 1^-, u -> 0^-, u -> -inf) removed by substitution:
//   panel A, u in [0,1]:      1-u = r^(1/2H), so b^2 du = dr/(2H)
//   panel B, u in [-1,0]:     -u = r^(1/2H)
//   panel C, u in (-inf,-1]:   u = -1/t
// u_split, when finite and inside a panel, is added as a breakpoint (used
// for the diagonal weight in the 2D integral).
template <class F>
IntegrationResult integrate_weighted(double hurst, F&& f, double u_split, double rel_tol,
                                     std::size_t max_evals = 200000) {
  const double p = 1.0 / (2.0 * hurst);
  const double hm = hurst - 0.5;
  IntegrationResult total;
  total.converged = true;
  auto accumulate = [&](const IntegrationResult& r) {
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  };

  // Panel A.
  {
    auto integrand = [&](double r) { return f(1.0 - std::pow(r, p)) / (2.0 * hurst); };
    std::vector<double> pts{0.0, 1.0};
    if (u_split > 0.0 && u_split < 1.0)
      pts.insert(pts.begin() + 1, std::pow(1.0 - u_split, 2.0 * hurst));
    accumulate(integrate_segments(integrand, pts, 0.0, rel_tol, max_evals));
  }
  // Panel B.
  {
    auto integrand = [&](double r) {
      const double rp = std::pow(r, p);
      const double b = std::pow(rp, hm) - std::pow(1.0 + rp, hm);
      return b * b * p * std::pow(r, p - 1.0) * f(-rp);
    };
    std::vector<double> pts{0.0, 1.0};
    if (u_split > -1.0 && u_split < 0.0)
      pts.insert(pts.begin() + 1, std::pow(-u_split, 2.0 * hurst));
    accumulate(integrate_segments(integrand, pts, 0.0, rel_tol, max_evals));
  }
  // Panel C.
  {
    auto integrand = [&](double t) {
      const double b = std::pow(1.0 + t, hm) - 1.0;
      return std::pow(t, -1.0 - 2.0 * hurst) * b * b * f(-1.0 / t);
    };
    std::vector<double> pts{0.0, 1.0};
    if (u_split < -1.0) pts.insert(pts.begin() + 1, -1.0 / u_split);
    accumulate(integrate_segments(integrand, pts, 0.0, rel_tol, max_evals));
  }
  return total;
}

double cached_g0() {
  static const double value = g_at_zero();
  return value;
}

double moment_combinatorial_factor(int n) {
  // (2n)!/(2^n n!)
  double f = 1.0;
  for (int k = 1; k <= n; ++k) f *= 2.0 * k - 1.0;
  return f;
}

}  // namespace

double fou_variance(double hurst, double t_large) {
  require_hurst(hurst, "fou_variance");
  const double g = std::tgamma(hurst + 0.5);
  return std::pow(t_large, 2.0 * hurst) * g * g / (2.0 * std::sin(kPi * hurst));
}

QuadValue fou_covariance_time(double hurst, double t_large, double tau) {
  require_hurst(hurst, "fou_covariance_time");
  if (tau < 0.0) throw std::domain_error("fou_covariance_time: tau < 0");
  const double T = t_large;
  const double g = std::tgamma(hurst + 0.5);
  const double prefactor =
      g * g / (2.0 * std::sin(kPi * hurst) * std::tgamma(2.0 * hurst));
  const double two_h = 2.0 * hurst;
  const double p = 1.0 / two_h;

  IntegrationResult inner;
  inner.converged = true;
  // h in [0, tau]: substitution h = s^(1/2H) removes the h^(2H-1) weight.
  if (tau > 0.0) {
    auto f1 = [&](double s) {
      const double h = std::pow(s, p);
      return 0.5 * (std::exp(-(tau + h) / T) - std::exp(-(tau - h) / T)) / two_h;
    };
    const auto r1 = integrate(f1, 0.0, std::pow(tau, two_h), 0.0, 1e-10);
    inner.value += r1.value;
    inner.error += r1.error;
    inner.converged = inner.converged && r1.converged;
  }
  // h in [tau, h_max]; the integrand is exponentially small beyond h_max.
  const double h_max = tau + 50.0 * T;
  {
    auto f2 = [&](double h) {
      return 0.5 * (std::exp(-(tau + h) / T) + std::exp(-(h - tau) / T)) *
             std::pow(h, two_h - 1.0);
    };
    std::vector<double> pts;
    if (tau == 0.0) {
      // Endpoint singularity at h = 0: substituted panel up to T.
      auto f2s = [&](double s) {
        const double h = std::pow(s, p);
        return 0.5 * (std::exp(-h / T) + std::exp(-h / T)) / two_h;
      };
      const auto r0 = integrate(f2s, 0.0, std::pow(T, two_h), 0.0, 1e-10);
      inner.value += r0.value;
      inner.error += r0.error;
      inner.converged = inner.converged && r0.converged;
      pts = {T, 2.0 * T, 10.0 * T, h_max};
    } else {
      pts = {tau, tau + T, tau + 10.0 * T, h_max};
    }
    const auto r2 = integrate_segments(f2, pts, 0.0, 1e-10);
    inner.value += r2.value;
    inner.error += r2.error;
    inner.converged = inner.converged && r2.converged;
  }
  const double tail_bound =
      std::exp(-(h_max - tau) / T) * T * std::pow(h_max, two_h - 1.0);
  if (!inner.converged)
    throw std::runtime_error("fou_covariance_time: quadrature did not converge");
  return {prefactor * inner.value, prefactor * (inner.error + tail_bound) + 1e-300};
}

namespace {

// J(beta) = int_0^inf cos(beta x) x^(1-2H) / (1 + x^2) dx, beta >= 0.
QuadValue spectral_cosine_integral(double hurst, double beta) {
  const double mu = 2.0 - 2.0 * hurst;  // x^(mu-1) near the origin
  auto spectrum = [&](double x) { return std::pow(x, 1.0 - 2.0 * hurst) / (1.0 + x * x); };

  double value = 0.0, error = 0.0;
  // Head [0, 1] with the x = s^(1/mu) substitution (removes the H > 1/2
  // endpoint singularity; harmless otherwise).
  {
    auto head = [&](double s) {
      const double x = std::pow(s, 1.0 / mu);
      return std::cos(beta * x) / (mu * (1.0 + x * x));
    };
    const auto r = integrate(head, 0.0, 1.0, 0.0, 1e-11);
    value += r.value;
    error += r.error;
  }

  if (beta == 0.0) {
    const double x_cut = 100.0;
    const auto r = integrate_segments(spectrum, {1.0, 10.0, x_cut}, 0.0, 1e-11);
    value += r.value;
    error += r.error;
    // Analytic tail series of x^(-1-2H) (1 - x^-2 + x^-4 - ...).
    const double h2 = 2.0 * hurst;
    double tail = 0.0;
    double sign = 1.0;
    for (int k = 0; k < 3; ++k) {
      tail += sign * std::pow(x_cut, -h2 - 2.0 * k) / (h2 + 2.0 * k);
      sign = -sign;
    }
    value += tail;
    error += std::pow(x_cut, -h2 - 6.0) / (h2 + 6.0);
    return {value, error};
  }

  auto osc = [&](double x) { return std::cos(beta * x) * spectrum(x); };
  auto zero = [&](long k) { return (0.5 * kPi + kPi * static_cast<double>(k)) / beta; };
  long k0 = 0;
  while (zero(k0) < std::max(4.0, 2.0 / beta)) ++k0;
  // Body [1, first retained zero].
  {
    std::vector<double> pts{1.0};
    for (long k = 0; k < k0; ++k)
      if (zero(k) > 1.0) pts.push_back(zero(k));
    pts.push_back(zero(k0));
    const auto r = integrate_segments(osc, pts, 0.0, 1e-11);
    value += r.value;
    error += r.error;
  }
  // Alternating half-period tail, accelerated by repeated averaging.
  std::vector<double> partial;
  double running = 0.0;
  const long max_segments = 60;
  for (long j = 0; j < max_segments; ++j) {
    const auto r = integrate(osc, zero(k0 + j), zero(k0 + j + 1), 0.0, 1e-11);
    error += r.error;
    running += r.value;
    partial.push_back(running);
    if (std::abs(r.value) < 1e-14 * (std::abs(value) + std::abs(running))) break;
  }
  std::vector<double> row = partial;
  double accelerated = row.back();
  double prev = accelerated;
  while (row.size() > 1) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
    prev = accelerated;
    accelerated = row.back();
  }
  value += accelerated;
  error += std::abs(accelerated - prev) + 1e-300;
  return {value, error};
}

}  // namespace

QuadValue fou_covariance_spectral(double hurst, double t_large, double tau) {
  require_hurst(hurst, "fou_covariance_spectral");
  if (tau < 0.0) throw std::domain_error("fou_covariance_spectral: tau < 0");
  const double g = std::tgamma(hurst + 0.5);
  const double prefactor = std::pow(t_large, 2.0 * hurst) * g * g / kPi;
  const QuadValue j = spectral_cosine_integral(hurst, tau / t_large);
  return {prefactor * j.value, prefactor * j.error + 1e-300};
}

QuadValue xtilde_covariance(double t_large, double tau) {
  if (!(tau > 0.0))
    throw std::domain_error("xtilde_covariance: tau must be positive (variance diverges)");
  const double T = t_large;
  double value = 0.0, error = 0.0;
  // h in [0, tau]: bracket reduces to -e^(-tau/T) sinh(h/T); smooth at 0
  // (series for tiny h avoids 0/0).
  {
    auto f1 = [&](double h) {
      const double y = h / T;
      if (y < 1e-8) return -std::exp(-tau / T) * (1.0 + y * y / 6.0) / T;
      return -std::exp(-tau / T) * std::sinh(y) / h;
    };
    const auto r = integrate(f1, 0.0, tau, 0.0, 1e-11);
    value += r.value;
    error += r.error;
  }
  // h in [tau, h_max]: cosh(tau/T) e^(-h/T) / h, in logarithmic coordinates.
  const double h_max = tau + 50.0 * T;
  {
    const double c = std::cosh(tau / T);
    auto f2 = [&](double u) { return c * std::exp(-std::exp(u) / T); };
    const auto r = integrate_segments(
        f2, {std::log(tau), std::log(std::min(tau + T, h_max)), std::log(h_max)}, 0.0,
        1e-11);
    value += r.value;
    error += r.error;
  }
  error += std::cosh(tau / T) * std::exp(-h_max / T) * T / h_max;  // truncation tail
  return {value, error + 1e-300};
}

QuadValue g_function(double t_large, double tau) {
  const double a = std::abs(tau);
  const QuadValue cov = xtilde_covariance(t_large, a);
  const double lp = std::max(std::log(t_large / a), 0.0);
  return {cov.value - lp, cov.error};
}

double g_at_zero() {
  // int_0^inf ln(h) e^(-h) dh in logarithmic coordinates u = ln h.
  auto f = [](double u) {
    const double h = std::exp(u);
    return u * h * std::exp(-h);
  };
  const auto r = integrate(f, -45.0, 5.0, 0.0, 1e-12, 400000);
  return r.value;
}

double c2_closed(double hurst, double t_large) {
  require_hurst(hurst, "c2_closed");
  const double g = std::tgamma(hurst + 0.5);
  return std::pow(t_large, 2.0 * hurst) * g * g /
         (std::sin(kPi * hurst) * std::tgamma(2.0 * hurst + 1.0));
}

QuadValue c2_integral(double hurst, double t_large) {
  require_hurst(hurst, "c2_integral");
  const auto r = integrate_weighted(
      hurst, [](double) { return 1.0; }, std::nan(""), 1e-10);
  const double scale = std::pow(t_large, 2.0 * hurst);
  return {scale * r.value, scale * r.error + 1e-300};
}

double c4_half_closed(double gamma_sq, double t_large) {
  if (!(gamma_sq >= 0.0 && gamma_sq < 0.25))
    throw std::domain_error("c4_half_closed: gamma_sq outside [0, 1/4)");
  return t_large * t_large * std::exp(4.0 * gamma_sq * cached_g0()) /
         ((1.0 - 4.0 * gamma_sq) * (1.0 - 2.0 * gamma_sq));
}

QuadValue c2n_quadrature(double hurst, double gamma_sq, int n, double t_large,
                         std::uint64_t mc_seed) {
  require_hurst(hurst, "c2n_quadrature");
  if (n < 1 || n > 3)
    throw std::domain_error("c2n_quadrature: n must be 1, 2 or 3");
  const double limit =
      (n == 1) ? 0.25 : std::min(0.25, hurst / static_cast<double>(n - 1));
  if (!(gamma_sq >= 0.0 && gamma_sq < limit))
    throw std::domain_error("c2n_quadrature: gamma_sq outside existence range");

  const double prefactor = std::pow(t_large, 2.0 * n * hurst) *
                           std::exp(2.0 * n * (n - 1) * gamma_sq * cached_g0());
  const double w = 4.0 * gamma_sq;

  if (n == 1) {
    const auto r = integrate_weighted(
        hurst, [](double) { return 1.0; }, std::nan(""), 1e-10);
    return {prefactor * r.value, prefactor * r.error + 1e-300};
  }

  if (n == 2) {
    double max_inner_rel = 0.0;
    auto inner = [&](double u) {
      auto weight = [&](double v) {
        if (gamma_sq == 0.0) return 1.0;
        return std::pow(std::abs(u - v), -w);
      };
      const auto r = integrate_weighted(hurst, weight, u, 1e-8, 60000);
      const double rel = r.error / (std::abs(r.value) + 1e-300);
      max_inner_rel = std::max(max_inner_rel, rel);
      return r.value;
    };
    const auto outer = integrate_weighted(hurst, inner, std::nan(""), 1e-6, 40000);
    if (!outer.converged)
      throw std::runtime_error("c2n_quadrature: 2D quadrature did not converge");
    const double err = outer.error + max_inner_rel * std::abs(outer.value);
    return {prefactor * outer.value, prefactor * err + 1e-300};
  }

  // n == 3: importance-sampled Monte Carlo. Each coordinate is drawn from
  // a three-piece proposal matching the b^2 singularities at 1^-, 0^- and
  // the (-u)^(2H-3) tail, so the importance weights stay bounded.
  const double alpha[3] = {0.5, 0.3, 0.2};
  auto q_density = [&](double u) {
    double q = 0.0;
    if (u > 0.0 && u < 1.0) q += alpha[0] * 2.0 * hurst * std::pow(1.0 - u, 2.0 * hurst - 1.0);
    if (u > -1.0 && u < 0.0) q += alpha[1] * 2.0 * hurst * std::pow(-u, 2.0 * hurst - 1.0);
    if (u < -1.0) q += alpha[2] * (2.0 - 2.0 * hurst) * std::pow(-u, 2.0 * hurst - 3.0);
    return q;
  };
  std::uint64_t state = mc_seed ^ 0xc2517ull;
  std::mt19937_64 engine(splitmix64(state));
  auto uniform = [&]() { return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53; };
  auto draw = [&]() {
    const double pick = uniform();
    const double v = uniform();
    if (pick < alpha[0]) return 1.0 - std::pow(v, 1.0 / (2.0 * hurst));
    if (pick < alpha[0] + alpha[1]) return -std::pow(v, 1.0 / (2.0 * hurst));
    return -std::pow(v, -1.0 / (2.0 - 2.0 * hurst));
  };
  const std::size_t samples = 600000;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double u[3];
    double weight = 1.0;
    for (double& uj : u) {
      uj = draw();
      weight *= bracket_sq(uj, hurst) / q_density(uj);
    }
    if (gamma_sq > 0.0) {
      weight *= std::pow(std::abs(u[0] - u[1]) * std::abs(u[0] - u[2]) *
                             std::abs(u[1] - u[2]),
                         -w);
    }
    const double delta = weight - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (weight - mean);
  }
  const double stderr_mean =
      std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  return {prefactor * mean, prefactor * 3.0 * stderr_mean + 1e-300};
}

double s2n_prediction(double hurst, double gamma_sq, int n, double t_large, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("s2n_prediction: tau must be positive");
  const double c = (n == 1) ? c2_closed(hurst, t_large)
                            : c2n_quadrature(hurst, gamma_sq, n, t_large).value;
  const double exponent = 2.0 * n * hurst - 2.0 * n * (n - 1) * gamma_sq;
  return c * moment_combinatorial_factor(n) * std::pow(tau / t_large, exponent);
}

double flatness_prediction(double hurst, double gamma_sq, double t_large, double tau) {
  if (!(gamma_sq >= 0.0 && gamma_sq < std::min(0.25, hurst)))
    throw std::domain_error("flatness_prediction: gamma_sq outside existence range");
  if (!(tau > 0.0)) throw std::domain_error("flatness_prediction: tau must be positive");
  const double c2 = c2_closed(hurst, t_large);
  const double c4 = c2n_quadrature(hurst, gamma_sq, 2, t_large).value;
  return c4 / (c2 * c2) * std::pow(tau / t_large, -4.0 * gamma_sq);
}

double chaos_correlator(std::span<const double> points, double gamma_sq, double t_large,
                        int n) {
  if (n < 1 || static_cast<std::size_t>(n) != points.size())
    throw std::domain_error("chaos_correlator: n must match the number of points");
  if (n > 1 && !(gamma_sq < std::min(0.25, 1.0 / (2.0 * (n - 1)))))
    throw std::domain_error("chaos_correlator: gamma_sq outside existence range");
  double product = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(points[i] - points[j]);
      if (d == 0.0) throw std::domain_error("chaos_correlator: coincident points");
      if (gamma_sq == 0.0) continue;
      const double g = g_function(t_large, d).value;
      const double abs_plus = std::exp(std::max(std::log(d), 0.0));
      product *= std::exp(4.0 * gamma_sq * g) / std::pow(abs_plus, 4.0 * gamma_sq);
    }
  }
  return std::pow(t_large, 2.0 * n * (n - 1) * gamma_sq) * product;
}

TheoryReport make_theory_report(const SimConfig& config, std::span<const int> orders) {
  validate_or_throw(config);
  TheoryReport report;
  const double H = config.hurst;
  const double T = config.t_large;
  report.variance = fou_variance(H, T);
  for (const double tau : {0.0, T / 8.0, T / 2.0, T, 3.0 * T})
    report.covariance_samples.emplace_back(tau, fou_covariance_time(H, T, tau));
  report.c2 = c2_closed(H, T);
  const int max_order =
      (config.gamma_sq == 0.0) ? 6 : max_even_moment(H, config.gamma_sq);
  for (const int order : orders) {
    if (order % 2 != 0 || order < 2)
      throw std::domain_error("make_theory_report: orders must be even and >= 2");
    if (order > 6 || (max_order != kAllMomentsFinite && order > max_order))
      continue;  // outside the guaranteed existence or practical range
    const int n = order / 2;
    const QuadValue c = c2n_quadrature(H, config.gamma_sq, n, T);
    report.c2n[order] = c;
    const double exponent = 2.0 * n * H - 2.0 * n * (n - 1) * config.gamma_sq;
    const double amplitude =
        c.value * moment_combinatorial_factor(n) * std::pow(T, -exponent);
    report.s2n_scaling[order] = {exponent, amplitude};
    if (order == 4) report.c4 = c;
  }
  report.flatness_exponent = -4.0 * config.gamma_sq;
  if (report.c4.value > 0.0)
    report.flatness_amplitude = report.c4.value / (report.c2 * report.c2);
  return report;
}

}  // namespace mfou
