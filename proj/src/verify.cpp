#include "mfou/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "mfou/noise.hpp"
#include "mfou/spectral.hpp"
#include "mfou/stats.hpp"
#include "mfou/synthesis.hpp"
#include "mfou/theory.hpp"

namespace mfou {

namespace {

std::string cell_label(double hurst, double gamma_sq) {
  std::ostringstream os;
  // ';' keeps the label CSV-safe when it becomes part of a check name.
  os << std::setprecision(3) << "[H=" << hurst << ";g2=" << gamma_sq << "]";
  return os.str();
}

VerifyCheck rel_check(std::string name, double empirical, double theoretical,
                      double rel_tol) {
  VerifyCheck c{std::move(name), empirical, theoretical, rel_tol, false};
  c.pass = std::abs(empirical - theoretical) <= rel_tol * std::abs(theoretical);
  return c;
}

VerifyCheck abs_check(std::string name, double empirical, double theoretical,
                      double abs_tol) {
  VerifyCheck c{std::move(name), empirical, theoretical, abs_tol, false};
  c.pass = std::abs(empirical - theoretical) <= abs_tol;
  return c;
}

// OLS of ln y against ln x.
std::pair<double, double> loglog_fit(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

// Cyclic lag covariance averaged over the grid; the H = 0 field has an
// exactly vanishing DC component, so no mean subtraction is needed.
double cyclic_covariance(const std::vector<double>& x, std::size_t lag) {
  const std::size_t n = x.size();
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) acc += x[t] * x[(t + lag) % n];
  return acc / static_cast<double>(n);
}

// Exact lag covariance of the field obtained by applying the spectral filter
// a*b to white noise with variance dt per sample: dt * idft(|a b|^2). This is
// the deterministic expectation of the synthesized second-order statistics,
// so empirical estimates differ from it by sampling noise only.
std::vector<double> filter_covariance(const Spectrum& a, const Spectrum& b, double dt) {
  Spectrum p;
  p.coeffs.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    p.coeffs[i] = std::norm(a.coeffs[i] * b.coeffs[i]);
  std::vector<double> c = idft(p);
  for (double& v : c) v *= dt;
  return c;
}

double geometric_mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (const double x : v) acc += std::log(x);
  return std::exp(acc / static_cast<double>(v.size()));
}

void oracle_checks(VerifyReport& report) {
  std::mt19937_64 engine(0x0f0f1234u);
  std::normal_distribution<double> normal(0.0, 1.0);

  // DFT and circular convolution against the direct O(N^2) sums.
  {
    const std::size_t n = 64;
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = normal(engine);
    for (auto& v : y) v = normal(engine);
    const Spectrum s = dft(x);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> naive = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double angle = -2.0 * 3.14159265358979323846 *
                             static_cast<double>(k * t % n) / static_cast<double>(n);
        naive += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
      }
      worst = std::max(worst, std::abs(s.coeffs[k] - naive));
    }
    report.checks.push_back(abs_check("oracle_dft_vs_naive_N64", worst, 0.0, 1e-10));

    const std::vector<double> z = circular_convolve(x, y);
    worst = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      double naive = 0.0;
      for (std::size_t s2 = 0; s2 < n; ++s2) naive += x[s2] * y[(t + n - s2) % n];
      worst = std::max(worst, std::abs(z[t] - naive));
    }
    report.checks.push_back(
        abs_check("oracle_convolution_vs_naive_N64", worst, 0.0, 1e-10));
  }

  // Structure function against a brute-force double loop.
  {
    const std::size_t n = 1024;
    SampledPath path;
    path.dt = 1.0 / static_cast<double>(n);
    path.values.resize(n);
    for (auto& v : path.values) v = normal(engine);
    const std::vector<double> scales{path.dt, 3.0 * path.dt, 17.0 * path.dt};
    const std::vector<int> orders{2, 3, 4};
    const std::vector<SampledPath> paths{path};
    const MomentTable table = structure_function(paths, orders, scales);
    double worst = 0.0;
    for (std::size_t si = 0; si < scales.size(); ++si) {
      const auto k = static_cast<std::size_t>(std::round(scales[si] / path.dt));
      for (const int order : orders) {
        double acc = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
          const double d = path.values[t + k] - path.values[t];
          double p = 1.0;
          for (int e = 0; e < order; ++e) p *= d;
          acc += p;
        }
        acc /= static_cast<double>(n - k);
        worst = std::max(worst, std::abs(acc - table.s_n.at(order)[si]));
      }
    }
    report.checks.push_back(
        abs_check("oracle_structure_function_N1024", worst, 0.0, 1e-12));
  }
}

void theory_checks(const VerifyOptions& options, VerifyReport& report) {
  const double T = options.base.t_large;

  {
    const double var = fou_variance(0.5, T);
    const QuadValue cov0 = fou_covariance_time(0.5, T, 0.0);
    double worst = std::abs(cov0.value - var) / var;
    for (const double H : options.hursts) {
      const QuadValue c = fou_covariance_time(H, T, 0.0);
      worst = std::max(worst, std::abs(c.value - fou_variance(H, T)) / fou_variance(H, T));
    }
    report.checks.push_back(
        abs_check("theory_covariance_tau0_equals_variance_rel", worst, 0.0, 1e-6));
  }
  {
    double worst_ratio = 0.0;
    for (const double H : options.hursts) {
      for (const double tau : {0.1 * T, 0.5 * T, T}) {
        const QuadValue a = fou_covariance_time(H, T, tau);
        const QuadValue b = fou_covariance_spectral(H, T, tau);
        const double allowed = std::max(1e-4, a.error + b.error);
        worst_ratio = std::max(worst_ratio, std::abs(a.value - b.value) / allowed);
      }
    }
    report.checks.push_back(
        abs_check("theory_time_vs_spectral_covariance", worst_ratio, 0.0, 1.0));
  }
  report.checks.push_back(abs_check("theory_g_at_zero", g_at_zero(), -0.577216, 1e-5));
  {
    // Asymptotic log slope of the base-field covariance in the continuum,
    // eps -> 0 theory: C(tau) - C(2 tau) -> ln 2 deep inside the range.
    const double tau = 1e-4 * T;
    const QuadValue a = xtilde_covariance(T, tau);
    const QuadValue b = xtilde_covariance(T, 2.0 * tau);
    report.checks.push_back(abs_check("theory_xtilde_ln2_slope", a.value - b.value,
                                      std::log(2.0), 1e-3));
  }
  {
    const QuadValue q = c2n_quadrature(0.5, 0.04, 2, T);
    report.checks.push_back(
        rel_check("theory_c4_quadrature_vs_closed_H05", q.value,
                  c4_half_closed(0.04, T), 1e-3));
  }
  {
    double worst = 0.0;
    for (const double H : options.hursts) {
      const QuadValue q = c2n_quadrature(H, 0.0, 2, T);
      const double c2 = c2_closed(H, T);
      worst = std::max(worst, std::abs(q.value - c2 * c2) / (c2 * c2));
    }
    report.checks.push_back(
        abs_check("theory_gaussian_factorization_c4_rel", worst, 0.0, 1e-3));
  }
}

void determinism_check(const VerifyOptions& options, VerifyReport& report) {
  SimConfig small = options.base;
  small.n_points = 1u << 12;
  small.epsilon = 4.0 * small.t_tot / static_cast<double>(small.n_points);
  small.t_large = small.t_tot / 64.0;
  small.hurst = options.hursts.front();
  small.gamma_sq = options.gamma_sqs.back();
  small.n_traj = 2;
  const TrajectoryBundle a = synth_bundle(small, 1);
  const TrajectoryBundle b = synth_bundle(small, 1);
  const bool identical =
      std::memcmp(a.x.values.data(), b.x.values.data(),
                  a.x.values.size() * sizeof(double)) == 0 &&
      std::memcmp(a.x_tilde.values.data(), b.x_tilde.values.data(),
                  a.x_tilde.values.size() * sizeof(double)) == 0 &&
      std::memcmp(a.m.values.data(), b.m.values.data(),
                  a.m.values.size() * sizeof(double)) == 0;
  report.checks.push_back(
      abs_check("determinism_repeat_bundle_bitwise", identical ? 0.0 : 1.0, 0.0, 0.0));
}

}  // namespace

bool VerifyReport::overall() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerifyCheck& c) { return c.pass; });
}

VerifyReport run_verify(const VerifyOptions& options, std::ostream* log) {
  VerifyReport report;
  const SimConfig& base = options.base;
  const double T = base.t_large;
  const double fit_lo = 8.0 * base.epsilon * (1.0 - 1e-9);
  const double fit_hi = (T / 16.0) * (1.0 + 1e-9);
  const std::vector<int> orders{2, 3, 4};

  // Exact expected covariance of the base field under the scheme (it uses only
  // the H = 0 and exponential kernels, so it is the same for every cell).
  // Scale-dependent empirical statistics are compared against these exact
  // finite-size expectations: at this resolution the regularization scale eps
  // shifts the asymptotic power laws by more than the tolerances, and the
  // asymptotic constants themselves are verified on the theory side where the
  // eps -> 0 limit is available in closed or quadrature form.
  std::vector<double> cov_xt;
  {
    SimConfig cfg = base;
    cfg.hurst = 0.5;
    cfg.gamma_sq = 0.0;
    validate_or_throw(cfg);
    cov_xt = filter_covariance(kernel_spectrum_exponential(cfg).spec,
                               kernel_spectrum_h0(cfg).spec, cfg.dt());
  }

  bool xtilde_done = false;
  for (const double H : options.hursts) {
    std::vector<double> s2_amplitudes;
    double var_sum = 0.0;
    std::size_t var_count = 0;

    for (const double g2 : options.gamma_sqs) {
      SimConfig cfg = base;
      cfg.hurst = H;
      cfg.gamma_sq = g2;
      validate_or_throw(cfg);
      const std::string label = cell_label(H, g2);
      if (log) (*log) << "verify: synthesizing cell " << label << "\n" << std::flush;

      const SynthesisKernels kernels = SynthesisKernels::build(cfg);
      // Exact expected covariance of X. The chaos weight is normalized to
      // E[M^2] = 1, so second-order statistics match the Gaussian case.
      const std::vector<double> cov_x = filter_covariance(
          kernels.exponential.spec, kernels.fractional.spec, cfg.dt());
      std::vector<SampledPath> paths;
      paths.reserve(cfg.n_traj);
      double m2_mean = 0.0;

      // Lags for the log-covariance probe of the base field.
      std::vector<std::size_t> cov_lags;
      std::vector<double> cov_acc;
      if (!xtilde_done) {
        for (double tau = fit_lo; 2.0 * tau <= T / 16.0 + 1e-12; tau *= 2.0) {
          if (tau > T / 32.0) break;
          cov_lags.push_back(static_cast<std::size_t>(std::round(tau / cfg.dt())));
          cov_lags.push_back(static_cast<std::size_t>(std::round(2.0 * tau / cfg.dt())));
        }
        cov_acc.assign(cov_lags.size(), 0.0);
      }

      for (std::size_t i = 0; i < cfg.n_traj; ++i) {
        TrajectoryBundle bundle = synth_bundle(cfg, i, kernels);
        double m2 = 0.0;
        for (const double m : bundle.m.values) m2 += m * m;
        m2_mean += m2 / static_cast<double>(bundle.m.values.size());
        double xx = 0.0;
        for (const double x : bundle.x.values) xx += x * x;
        var_sum += xx / static_cast<double>(bundle.x.values.size());
        ++var_count;
        if (!xtilde_done)
          for (std::size_t li = 0; li < cov_lags.size(); ++li)
            cov_acc[li] += cyclic_covariance(bundle.x_tilde.values, cov_lags[li]);
        paths.push_back(std::move(bundle.x));
      }
      m2_mean /= static_cast<double>(cfg.n_traj);

      if (!xtilde_done) {
        // Logarithmic decay of the base-field covariance: each octave step
        // drops the covariance by ln 2 up to the known finite-size remainder,
        // so compare against the exact expectation and normalize by ln 2.
        double worst = 0.0;
        for (std::size_t li = 0; li + 1 < cov_lags.size(); li += 2) {
          const double diff = (cov_acc[li] - cov_acc[li + 1]) /
                              static_cast<double>(cfg.n_traj);
          const double expected = cov_xt[cov_lags[li]] - cov_xt[cov_lags[li + 1]];
          worst = std::max(worst, std::abs(diff - expected) / std::log(2.0));
        }
        VerifyCheck c{"xtilde_log_covariance_diff_rel", worst, 0.0, 0.10, worst <= 0.10};
        report.checks.push_back(c);
        xtilde_done = true;
      }

      if (log) (*log) << "verify: analyzing cell " << label << "\n" << std::flush;
      const std::vector<double> scales = default_scales(cfg, options.scales_per_octave);
      const MomentTable table = structure_function(paths, orders, scales);

      // Second-order structure function over the fit range, empirical vs the
      // exact expectation S2(k) = 2 (C(0) - C(k)).
      std::vector<double> fit_tau, s2_emp, s2_th;
      for (std::size_t si = 0; si < table.scales.size(); ++si) {
        const double tau = table.scales[si];
        if (tau < fit_lo || tau > fit_hi) continue;
        const auto k = static_cast<std::size_t>(std::round(tau / cfg.dt()));
        fit_tau.push_back(tau);
        s2_emp.push_back(table.s_n.at(2)[si]);
        s2_th.push_back(2.0 * (cov_x[0] - cov_x[k]));
      }
      const auto [s2_slope_emp, s2_int_emp] = loglog_fit(fit_tau, s2_emp);
      const auto [s2_slope_th, s2_int_th] = loglog_fit(fit_tau, s2_th);
      report.checks.push_back(
          abs_check("s2_exponent" + label, s2_slope_emp, s2_slope_th, 0.05));
      // The fitted line passes through the log-centroid of the fit range, so
      // the amplitude there is the geometric mean over the fit scales.
      const double amplitude = geometric_mean(s2_emp);
      report.checks.push_back(
          rel_check("s2_amplitude" + label, amplitude, geometric_mean(s2_th), 0.10));
      s2_amplitudes.push_back(amplitude);

      // Odd-order symmetry across fit-range scales.
      {
        double worst = 0.0;
        for (std::size_t si = 0; si < table.scales.size(); ++si) {
          const double tau = table.scales[si];
          if (tau < fit_lo || tau > fit_hi) continue;
          const double s2 = table.s_n.at(2)[si];
          worst = std::max(worst,
                           std::abs(table.s_n.at(3)[si]) / std::pow(s2, 1.5));
        }
        report.checks.push_back(abs_check("s3_symmetry" + label, worst, 0.0, 0.1));
      }

      const std::vector<double> f = flatness(table);
      std::vector<double> f_val;
      for (std::size_t si = 0; si < table.scales.size(); ++si) {
        const double tau = table.scales[si];
        if (tau < fit_lo || tau > fit_hi) continue;
        f_val.push_back(f[si]);
      }

      if (g2 == 0.0) {
        double worst = 0.0;
        for (const double fv : f_val) worst = std::max(worst, std::abs(fv - 1.0));
        report.checks.push_back(abs_check("flatness_constancy" + label, worst, 0.0, 0.1));
      }
      if (g2 == options.gamma_sqs.back() && g2 > 0.0) {
        if (log) (*log) << "verify: expected flatness for H=" << H << "\n" << std::flush;
        // Exact expected flatness: conditioned on the chaos weight the
        // increment is Gaussian with variance dt sum_s a_s^2 M_s^2 (a the
        // increment filter), so E S4 = 3 dt^2 sum_{s,s'} a_s^2 a_{s'}^2
        // E[M_s^2 M_{s'}^2] with E[M_0^2 M_l^2] = exp(4 gamma_sq C_xt(l)),
        // and the flatness is a quadratic form evaluated by convolution.
        Spectrum prod;
        prod.coeffs.resize(cfg.n_points);
        for (std::size_t j = 0; j < cfg.n_points; ++j)
          prod.coeffs[j] =
              kernels.exponential.spec.coeffs[j] * kernels.fractional.spec.coeffs[j];
        const std::vector<double> filt = idft(prod);
        std::vector<double> w(cfg.n_points);
        for (std::size_t l = 0; l < cfg.n_points; ++l)
          w[l] = std::exp(4.0 * g2 * cov_xt[l]);
        std::vector<double> f_th;
        std::vector<double> b(cfg.n_points);
        for (const double tau : fit_tau) {
          const auto k = static_cast<std::size_t>(std::round(tau / cfg.dt()));
          for (std::size_t s = 0; s < cfg.n_points; ++s) {
            const double a = filt[(s + k) % cfg.n_points] - filt[s];
            b[s] = a * a;
          }
          const std::vector<double> conv = circular_convolve(w, b);
          double num = 0.0, den = 0.0;
          for (std::size_t s = 0; s < cfg.n_points; ++s) {
            num += b[s] * conv[s];
            den += b[s];
          }
          f_th.push_back(num / (den * den));
        }
        const auto [fl_slope_emp, fl_int_emp] = loglog_fit(fit_tau, f_val);
        const auto [fl_slope_th, fl_int_th] = loglog_fit(fit_tau, f_th);
        report.checks.push_back(
            abs_check("flatness_exponent" + label, fl_slope_emp, fl_slope_th, 0.05));
        report.checks.push_back(rel_check("flatness_amplitude" + label,
                                          geometric_mean(f_val), geometric_mean(f_th),
                                          0.20));
        report.checks.push_back(abs_check("chaos_m2_mean" + label, m2_mean, 1.0, 0.1));
      }
    }

    // Stationary variance pooled over the gamma cells (the chaos
    // normalization makes it gamma-independent), against the closed form.
    report.checks.push_back(rel_check(
        "variance[H=" + std::to_string(H).substr(0, 5) + "]",
        var_sum / static_cast<double>(var_count), fou_variance(H, T), 0.05));

    // gamma-independence of the second-order amplitude.
    double worst = 0.0;
    for (std::size_t i = 0; i < s2_amplitudes.size(); ++i)
      for (std::size_t j = i + 1; j < s2_amplitudes.size(); ++j)
        worst = std::max(worst, std::abs(s2_amplitudes[i] - s2_amplitudes[j]) /
                                    std::min(s2_amplitudes[i], s2_amplitudes[j]));
    report.checks.push_back(abs_check(
        "s2_gamma_independence[H=" + std::to_string(H).substr(0, 5) + "]", worst, 0.0,
        0.05));
  }

  if (log) (*log) << "verify: theory self-consistency\n" << std::flush;
  theory_checks(options, report);
  if (options.with_oracle_checks) oracle_checks(report);
  determinism_check(options, report);
  return report;
}

std::string render_verify_text(const VerifyReport& report) {
  std::ostringstream os;
  os << std::setprecision(6);
  for (const auto& c : report.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << ": empirical=" << c.empirical
       << " theoretical=" << c.theoretical << " tolerance=" << c.tolerance << "\n";
  }
  os << (report.overall() ? "OVERALL PASS" : "OVERALL FAIL") << " ("
     << report.checks.size() << " checks)\n";
  return os.str();
}

void write_verify_csv(const VerifyReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path.string());
  out.precision(12);
  out << "name,empirical,theoretical,tolerance,pass\n";
  for (const auto& c : report.checks)
    out << c.name << ',' << c.empirical << ',' << c.theoretical << ',' << c.tolerance
        << ',' << (c.pass ? 1 : 0) << '\n';
}

}  // namespace mfou
