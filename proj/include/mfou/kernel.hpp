#pragma once

#include <vector>

#include "mfou/config.hpp"
#include "mfou/spectral.hpp"

namespace mfou {

enum class KernelKind { fractional, log_h0, exponential };

/// Length-N spectrum of a discretized causal kernel.
struct KernelSpectrum {
  Spectrum spec;
  KernelKind kind = KernelKind::fractional;
  double hurst = 0.0;  // meaningful for kind == fractional
  double epsilon = 0.0;
  double dt = 0.0;
};

/// Samples of the regular kernel part (H-1/2)(t+eps)^(H-3/2) on the causal
/// grid t_i = i*dt, i = 0..N-1, cyclically indexed over one period.
std::vector<double> sample_frak_h(const SimConfig& config, double hurst);
std::vector<double> sample_frak_h(const SimConfig& config);

/// Fractional kernel spectrum for H in (0,1):
/// coeffs = dt * DFT{frak_h} + eps^(H-1/2). The additive constant is the
/// Dirac term kept as an exact flat spectrum.
KernelSpectrum kernel_spectrum_fractional(const SimConfig& config);

/// H = 0 kernel spectrum with the DC bin removed exactly:
/// coeffs = dt * (DFT{frak_h0}[w] - DFT{frak_h0}[0]).
KernelSpectrum kernel_spectrum_h0(const SimConfig& config);

/// Spectrum of the causal OU kernel samples e^(-t_i/T); no dt weight here,
/// the pipeline's single dt lives on the fractional/H=0 kernel spectra.
KernelSpectrum kernel_spectrum_exponential(const SimConfig& config);

}  // namespace mfou
