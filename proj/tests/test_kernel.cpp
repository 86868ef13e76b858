#include <doctest.h>

#include <cmath>
#include <complex>

#include "mfou/kernel.hpp"
#include "mfou/spectral.hpp"

using namespace mfou;

namespace {

SimConfig kernel_config(double hurst) {
  SimConfig c;
  c.n_points = 1u << 10;
  c.t_tot = 1.0;
  c.t_large = 1.0 / 64.0;
  c.epsilon = 4.0 * c.dt();
  c.hurst = hurst;
  return c;
}

}  // namespace

TEST_CASE("regular kernel part: sign and endpoint value") {
  const SimConfig c = kernel_config(2.0 / 3.0);
  const auto g = sample_frak_h(c);
  REQUIRE(g.size() == c.n_points);
  CHECK(g[0] ==
        doctest::Approx((1.0 / 6.0) * std::pow(c.epsilon, -5.0 / 6.0)).epsilon(1e-12));
  for (double v : g) CHECK(v > 0.0);

  const auto g_rough = sample_frak_h(kernel_config(1.0 / 3.0));
  for (double v : g_rough) CHECK(v < 0.0);

  // Decreasing magnitude away from the origin.
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(std::abs(g[i]) < std::abs(g[i - 1]));
}

TEST_CASE("H = 1/2 collapses the fractional kernel to a pure Dirac") {
  const SimConfig c = kernel_config(0.5);
  const auto g = sample_frak_h(c);
  for (double v : g) CHECK(v == 0.0);
  const KernelSpectrum k = kernel_spectrum_fractional(c);
  for (const auto& coeff : k.spec.coeffs) {
    CHECK(std::abs(coeff.real() - 1.0) < 1e-12);
    CHECK(std::abs(coeff.imag()) < 1e-12);
  }
}

TEST_CASE("fractional spectrum structure") {
  const SimConfig c = kernel_config(2.0 / 3.0);
  const KernelSpectrum k = kernel_spectrum_fractional(c);
  REQUIRE(k.spec.size() == c.n_points);
  CHECK(k.kind == KernelKind::fractional);
  CHECK(k.dt == c.dt());

  // The spectrum is built from cell averages of frak_h, which make the DC bin
  // dt * sum + eps^(H-1/2) telescope exactly to (t_tot + eps)^(H-1/2).
  const double expected_dc = std::pow(c.t_tot + c.epsilon, c.hurst - 0.5);
  CHECK(k.spec.coeffs[0].real() == doctest::Approx(expected_dc).epsilon(1e-12));
  CHECK(std::abs(k.spec.coeffs[0].imag()) < 1e-12);

  // Inverting the spectrum reproduces dt * (cell averages of frak_h) plus the
  // Dirac at t = 0. The averages come from the antiderivative (t+eps)^(H-1/2).
  const auto cell_avg = [&](std::size_t i) {
    const double p = c.hurst - 0.5;
    const double lo = static_cast<double>(i) * c.dt() + c.epsilon;
    return (std::pow(lo + c.dt(), p) - std::pow(lo, p)) / c.dt();
  };
  const auto back = idft(k.spec);
  const double dirac = std::pow(c.epsilon, c.hurst - 0.5);
  CHECK(back[0] == doctest::Approx(c.dt() * cell_avg(0) + dirac).epsilon(1e-10));
  for (std::size_t i = 1; i < back.size(); ++i)
    CHECK(back[i] == doctest::Approx(c.dt() * cell_avg(i)).epsilon(1e-8));

  // The averages agree with the pointwise samples away from the origin and
  // bracket them near it (frak_h is monotone on each cell).
  const auto g = sample_frak_h(c);
  CHECK(cell_avg(0) < g[0]);
  CHECK(cell_avg(c.n_points / 2) == doctest::Approx(g[c.n_points / 2]).epsilon(2e-3));
}

TEST_CASE("H = 0 spectrum has an exactly empty DC bin") {
  const SimConfig c = kernel_config(0.5);  // hurst field unused by the H=0 kernel
  const KernelSpectrum k = kernel_spectrum_h0(c);
  CHECK(k.spec.coeffs[0] == std::complex<double>(0.0, 0.0));
  CHECK(k.kind == KernelKind::log_h0);

  // The real-space kernel it represents sums to zero: DFT at DC is the sum.
  const auto back = idft(k.spec);
  double total = 0.0;
  for (double v : back) total += v;
  CHECK(std::abs(total) < 1e-10);

  // The regular H=0 samples are all negative.
  const auto g0 = sample_frak_h(c, 0.0);
  for (double v : g0) CHECK(v < 0.0);
}

TEST_CASE("exponential kernel spectrum") {
  const SimConfig c = kernel_config(0.5);
  const KernelSpectrum k = kernel_spectrum_exponential(c);
  const std::size_t n = c.n_points;

  // DC equals the closed-form geometric sum; no dt weight anywhere.
  const double q = std::exp(-c.dt() / c.t_large);
  const double geometric = (1.0 - std::pow(q, static_cast<double>(n))) / (1.0 - q);
  CHECK(k.spec.coeffs[0].real() == doctest::Approx(geometric).epsilon(1e-12));

  // Closed form for every bin: sum q^i w^(ki) = (1 - q^n) / (1 - q w^k).
  for (std::size_t kk : {std::size_t{1}, std::size_t{7}, n / 2}) {
    const double angle = -2.0 * 3.14159265358979323846 * static_cast<double>(kk) /
                         static_cast<double>(n);
    const std::complex<double> w(std::cos(angle), std::sin(angle));
    const std::complex<double> expected =
        (1.0 - std::pow(q, static_cast<double>(n))) / (1.0 - q * w);
    CHECK(std::abs(k.spec.coeffs[kk] - expected) < 1e-10);
  }

  // Magnitude decreases monotonically up to Nyquist.
  for (std::size_t kk = 1; kk <= n / 2; ++kk)
    CHECK(std::abs(k.spec.coeffs[kk]) < std::abs(k.spec.coeffs[kk - 1]) + 1e-12);

  // Round trip back to the sampled exponential.
  const auto back = idft(k.spec);
  CHECK(back[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(back[5] == doctest::Approx(std::exp(-5.0 * c.dt() / c.t_large)).epsilon(1e-10));
}

TEST_CASE("kernel construction validates its config") {
  SimConfig c = kernel_config(0.5);
  c.epsilon = 0.0;
  CHECK_THROWS(kernel_spectrum_fractional(c));
  CHECK_THROWS(kernel_spectrum_exponential(c));
}
