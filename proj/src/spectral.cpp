#include "mfou/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfou {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_pow2(std::size_t n, const char* who) {
  if (!is_power_of_two(n))
    throw std::invalid_argument(std::string(who) + ": length must be a power of two");
}

// RAII around fftw buffers/plans. Plans are created with FFTW_ESTIMATE so
// the transform algorithm (and hence rounding) is reproducible run to run.
struct RealComplexPlan {
  std::size_t n;
  double* real;
  fftw_complex* cplx;  // n/2+1 bins
  fftw_plan fwd;
  fftw_plan bwd;

  explicit RealComplexPlan(std::size_t n_in) : n(n_in) {
    real = fftw_alloc_real(n);
    cplx = fftw_alloc_complex(n / 2 + 1);
    if (!real || !cplx) throw std::bad_alloc();
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, cplx, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real, FFTW_ESTIMATE);
  }
  ~RealComplexPlan() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(cplx);
  }
  RealComplexPlan(const RealComplexPlan&) = delete;
  RealComplexPlan& operator=(const RealComplexPlan&) = delete;
};

}  // namespace

Spectrum dft(std::span<const double> x) {
  require_pow2(x.size(), "dft");
  const std::size_t n = x.size();
  RealComplexPlan p(n);
  std::copy(x.begin(), x.end(), p.real);
  fftw_execute(p.fwd);
  Spectrum s;
  s.coeffs.resize(n);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k <= half; ++k)
    s.coeffs[k] = {p.cplx[k][0], p.cplx[k][1]};
  for (std::size_t k = half + 1; k < n; ++k)
    s.coeffs[k] = std::conj(s.coeffs[n - k]);
  return s;
}

std::vector<double> idft(const Spectrum& s) {
  const std::size_t n = s.size();
  require_pow2(n, "idft");
  // Hermitian check: coeffs[k] vs conj(coeffs[N-k]).
  double max_coeff = 0.0, max_asym = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    max_coeff = std::max(max_coeff, std::abs(s.coeffs[k]));
    const std::size_t mirror = (n - k) % n;
    max_asym = std::max(max_asym, std::abs(s.coeffs[k] - std::conj(s.coeffs[mirror])));
  }
  if (max_asym > 1e-10 * std::max(max_coeff, 1e-300))
    throw std::runtime_error("idft: spectrum is not Hermitian-symmetric");

  RealComplexPlan p(n);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k <= half; ++k) {
    p.cplx[k][0] = s.coeffs[k].real();
    p.cplx[k][1] = s.coeffs[k].imag();
  }
  // Bins 0 and N/2 must be purely real for a real signal.
  p.cplx[0][1] = 0.0;
  p.cplx[half][1] = 0.0;
  fftw_execute(p.bwd);
  std::vector<double> out(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = p.real[i] * inv_n;
  return out;
}

std::vector<double> circular_convolve(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("circular_convolve: length mismatch");
  Spectrum sx = dft(x);
  const Spectrum sy = dft(y);
  for (std::size_t k = 0; k < sx.size(); ++k) sx.coeffs[k] *= sy.coeffs[k];
  return idft(sx);
}

}  // namespace mfou
