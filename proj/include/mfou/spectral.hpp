#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mfou {

/// Full-length complex DFT of a real array. Forward transform is
/// unnormalized; the inverse carries the 1/N factor. Real input gives
/// Hermitian symmetry coeffs[k] = conj(coeffs[N-k mod N]).
struct Spectrum {
  std::vector<std::complex<double>> coeffs;

  std::size_t size() const { return coeffs.size(); }
};

/// Forward DFT. Length must be a power of two.
Spectrum dft(std::span<const double> x);

/// Inverse DFT of a Hermitian-symmetric spectrum back to a real array.
/// Throws if the symmetry is violated beyond 1e-10 relative.
std::vector<double> idft(const Spectrum& s);

/// z[t] = sum_s x[s] * y[(t-s) mod N], computed spectrally.
std::vector<double> circular_convolve(std::span<const double> x, std::span<const double> y);

}  // namespace mfou
