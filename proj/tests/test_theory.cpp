#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "mfou/quadrature.hpp"
#include "mfou/theory.hpp"

using namespace mfou;

TEST_CASE("adaptive quadrature on known integrals") {
  auto r = integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK(std::abs(r.value - std::sqrt(std::numbers::pi)) <= std::max(r.error, 1e-14));

  // Integrable endpoint singularity.
  r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-14, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-5));

  // Oscillatory.
  r = integrate([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::sin(40.0) / 40.0).epsilon(1e-10));

  r = integrate_segments([](double x) { return std::abs(x - 0.5); }, {0.0, 0.5, 1.0});
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("stationary variance closed form") {
  CHECK(fou_variance(0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(fou_variance(0.5, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  // Independent high-precision reference.
  CHECK(fou_variance(1.0 / 3.0, 1.0) == doctest::Approx(0.7356367107).epsilon(1e-9));
  // Scaling in T: factor T^(2H).
  CHECK(fou_variance(1.0 / 3.0, 2.0) ==
        doctest::Approx(std::pow(2.0, 2.0 / 3.0) * fou_variance(1.0 / 3.0, 1.0))
            .epsilon(1e-12));
}

TEST_CASE("time-domain covariance: tau = 0 recovers the variance") {
  for (const double hurst : {0.1, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9}) {
    const QuadValue v = fou_covariance_time(hurst, 1.0, 0.0);
    CHECK(v.value == doctest::Approx(fou_variance(hurst, 1.0)).epsilon(1e-6));
  }
}

TEST_CASE("time-domain covariance: H = 1/2 is the OU exponential") {
  const double t_large = 0.7;
  for (const double tau : {0.1, 0.5, 1.4, 3.0}) {
    const QuadValue v = fou_covariance_time(0.5, t_large, tau);
    const double expected = 0.5 * t_large * std::exp(-tau / t_large);
    CHECK(v.value == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("covariance decays at large lag") {
  // H < 1/2: past the zero crossing (between 2T and 4T) the covariance is
  // negative and decays as the power law tau^(2H-2).
  CHECK(fou_covariance_time(1.0 / 3.0, 1.0, 2.0).value > 0.0);
  double prev = fou_covariance_time(1.0 / 3.0, 1.0, 4.0).value;
  CHECK(prev < 0.0);
  for (const double tau : {8.0, 16.0}) {
    const double cur = fou_covariance_time(1.0 / 3.0, 1.0, tau).value;
    CHECK(cur < 0.0);
    CHECK(std::abs(cur) < std::abs(prev));
    prev = cur;
  }
  const double ratio = fou_covariance_time(1.0 / 3.0, 1.0, 32.0).value /
                       fou_covariance_time(1.0 / 3.0, 1.0, 16.0).value;
  CHECK(ratio == doctest::Approx(std::pow(2.0, 2.0 / 3.0 - 2.0)).epsilon(0.05));
}

TEST_CASE("spectral covariance agrees with the time-domain integral") {
  for (const double hurst : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
    for (const double tau : {0.0, 0.1, 1.0, 2.5}) {
      const QuadValue a = fou_covariance_time(hurst, 1.0, tau);
      const QuadValue b = fou_covariance_spectral(hurst, 1.0, tau);
      const double tol = std::max(1e-4, 2.0 * (a.error + b.error));
      CHECK(std::abs(a.value - b.value) <= tol);
    }
  }
}

TEST_CASE("base-field covariance") {
  CHECK_THROWS_AS(xtilde_covariance(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(xtilde_covariance(1.0, -0.5), std::domain_error);

  // ln(T/tau) dominates at small lag with slope exactly ln 2 per octave.
  const double small = 1e-5;
  const double diff = xtilde_covariance(1.0, small).value - xtilde_covariance(1.0, 2.0 * small).value;
  CHECK(diff == doctest::Approx(std::numbers::ln2).epsilon(1e-3));

  // Bounded remainder over a wide range of lags.
  for (const double tau : {1e-6, 1e-3, 0.1, 1.0}) {
    const double remainder = xtilde_covariance(1.0, tau).value - std::log(1.0 / tau);
    CHECK(std::abs(remainder) < 2.0);
  }

  // High-precision references (mpmath, 30 digits).
  CHECK(xtilde_covariance(1.0, 3.0).value == doctest::Approx(-0.1162463305).epsilon(2e-6));
  CHECK(xtilde_covariance(1.0, 0.01).value == doctest::Approx(4.0282309214).epsilon(1e-8));
}

TEST_CASE("g function and its limit") {
  CHECK(g_at_zero() == doctest::Approx(-std::numbers::egamma).epsilon(1e-7));
  // g(tau) -> g(0) as tau -> 0.
  CHECK(g_function(1.0, 1e-7).value == doctest::Approx(g_at_zero()).epsilon(1e-3));
  // Consistency with the covariance for tau < T: g = cov - ln(T/tau).
  const double tau = 0.02, t_large = 1.0;
  CHECK(g_function(t_large, tau).value ==
        doctest::Approx(xtilde_covariance(t_large, tau).value - std::log(t_large / tau))
            .epsilon(1e-8));
}

TEST_CASE("second-moment amplitude") {
  CHECK(c2_closed(0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c2_closed(1.0 / 3.0, 1.0) == doctest::Approx(1.6297768960).epsilon(1e-9));
  for (const double hurst : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
    const QuadValue integral = c2_integral(hurst, 1.0);
    CHECK(integral.value == doctest::Approx(c2_closed(hurst, 1.0)).epsilon(1e-6));
  }
  // T scaling.
  CHECK(c2_closed(2.0 / 3.0, 3.0) ==
        doctest::Approx(std::pow(3.0, 4.0 / 3.0) * c2_closed(2.0 / 3.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("fourth-moment amplitude at H = 1/2") {
  CHECK(c4_half_closed(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c4_half_closed(0.04, 1.0) == doctest::Approx(1.1798419510).epsilon(1e-7));
  double prev = c4_half_closed(0.0, 1.0);
  for (double g = 0.01; g < 0.12; g += 0.01) {
    const double cur = c4_half_closed(g, 1.0);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("moment amplitudes by quadrature") {
  // n = 1 is the squared-bracket integral: equals c2 for any gamma.
  CHECK(c2n_quadrature(1.0 / 3.0, 0.04, 1, 1.0).value ==
        doctest::Approx(c2_closed(1.0 / 3.0, 1.0)).epsilon(1e-6));

  // Gaussian factorization: gamma = 0 makes c4 = c2^2.
  for (const double hurst : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
    const double c2 = c2_closed(hurst, 1.0);
    CHECK(c2n_quadrature(hurst, 0.0, 2, 1.0).value ==
          doctest::Approx(c2 * c2).epsilon(1e-3));
  }

  // Against the H = 1/2 closed form.
  CHECK(c2n_quadrature(0.5, 0.04, 2, 1.0).value ==
        doctest::Approx(c4_half_closed(0.04, 1.0)).epsilon(1e-3));

  // Sixth moment, Monte Carlo: Gaussian factorization within its error bars.
  const QuadValue c6 = c2n_quadrature(0.5, 0.0, 3, 1.0);
  CHECK(std::abs(c6.value - 1.0) <= std::max(c6.error, 0.02));

  // Existence condition enforced.
  CHECK_THROWS(c2n_quadrature(1.0 / 3.0, 0.3, 2, 1.0));
  CHECK_THROWS(c2n_quadrature(0.2, 0.15, 3, 1.0));
}

TEST_CASE("structure function and flatness predictions") {
  // n = 1: slope 2H, amplitude c2 / T^2H.
  const double hurst = 1.0 / 3.0, t_large = 1.0 / 128.0;
  const double tau = 1e-3;
  const double s2 = s2n_prediction(hurst, 0.0, 1, t_large, tau);
  CHECK(s2 == doctest::Approx(c2_closed(hurst, t_large) *
                              std::pow(tau / t_large, 2.0 * hurst))
                  .epsilon(1e-10));
  CHECK(s2n_prediction(hurst, 0.0, 1, t_large, tau) /
            s2n_prediction(hurst, 0.0, 1, t_large, tau / 2.0) ==
        doctest::Approx(std::pow(2.0, 2.0 * hurst)).epsilon(1e-12));

  // n = 2, H = 1/2, gamma_sq = 0.04: exponent 4H - 4 gamma_sq = 1.84.
  const double ratio = s2n_prediction(0.5, 0.04, 2, t_large, tau) /
                       s2n_prediction(0.5, 0.04, 2, t_large, tau / 2.0);
  CHECK(ratio == doctest::Approx(std::pow(2.0, 1.84)).epsilon(1e-10));

  // Flatness: unity in the Gaussian case, anomalous power law otherwise.
  CHECK(flatness_prediction(2.0 / 3.0, 0.0, t_large, tau) == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(flatness_prediction(0.5, 0.04, t_large, t_large) ==
        doctest::Approx(c4_half_closed(0.04, t_large) /
                        (c2_closed(0.5, t_large) * c2_closed(0.5, t_large)))
            .epsilon(1e-3));
  CHECK(flatness_prediction(0.5, 0.04, t_large, tau) /
            flatness_prediction(0.5, 0.04, t_large, 2.0 * tau) ==
        doctest::Approx(std::pow(2.0, 4.0 * 0.04)).epsilon(1e-6));
}

TEST_CASE("chaos correlator") {
  const double points2[] = {0.0, 0.3};
  // Gaussian case: correlations switch off.
  CHECK(chaos_correlator(points2, 0.0, 1.0, 2) == doctest::Approx(1.0).epsilon(1e-12));
  // Single point: no pair factors.
  const double points1[] = {0.7};
  CHECK(chaos_correlator(points1, 0.04, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  // Two points, |u| < 1: T^(4 gs) e^(4 gs g(|u|)) with the plus-part norm at 1.
  const double gs = 0.04;
  const double expected = std::pow(1.0, 4.0 * gs) *
                          std::exp(4.0 * gs * g_function(1.0, 0.3).value);
  CHECK(chaos_correlator(points2, gs, 1.0, 2) == doctest::Approx(expected).epsilon(1e-8));
  // Coincident points diverge.
  const double coincident[] = {0.2, 0.2};
  CHECK_THROWS(chaos_correlator(coincident, gs, 1.0, 2));
}

TEST_CASE("theory report covers the requested orders") {
  SimConfig c;
  c.n_points = 1u << 12;
  c.t_tot = 1.0;
  c.t_large = 1.0 / 128.0;
  c.epsilon = 4.0 * c.dt();
  c.hurst = 0.5;
  c.gamma_sq = 0.04;
  const int orders[] = {2, 4};
  const TheoryReport report = make_theory_report(c, orders);
  CHECK(report.variance == doctest::Approx(fou_variance(0.5, c.t_large)).epsilon(1e-12));
  CHECK(report.c2 == doctest::Approx(c2_closed(0.5, c.t_large)).epsilon(1e-12));
  CHECK(report.c2n.count(2) == 1);
  CHECK(report.c2n.count(4) == 1);
  CHECK(report.s2n_scaling.at(2).first == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.s2n_scaling.at(4).first == doctest::Approx(1.84).epsilon(1e-12));
  CHECK(report.flatness_exponent == doctest::Approx(-0.16).epsilon(1e-12));
  CHECK(!report.covariance_samples.empty());

  // Odd orders are rejected; orders beyond the practical range are skipped.
  const int odd_orders[] = {3};
  CHECK_THROWS(make_theory_report(c, odd_orders));
  const int far_orders[] = {30};
  CHECK(make_theory_report(c, far_orders).c2n.empty());
}
