#pragma once

#include <optional>
#include <vector>

#include "mfou/config.hpp"
#include "mfou/kernel.hpp"
#include "mfou/noise.hpp"

namespace mfou {

enum class ChaosNormalization { empirical_variance, external_value };

/// Multiplicative chaos weight along one trajectory; strictly positive.
struct ChaosPath {
  std::vector<double> values;
  double gamma_sq = 0.0;
  ChaosNormalization normalization_used = ChaosNormalization::empirical_variance;
};

struct TrajectoryBundle {
  SampledPath x;        // MfOU trajectory
  SampledPath x_tilde;  // H = 0 base field
  ChaosPath m;
  std::size_t traj_index = 0;
};

/// Precomputed kernel spectra, shared across an ensemble.
struct SynthesisKernels {
  KernelSpectrum exponential;
  KernelSpectrum fractional;
  KernelSpectrum h0;

  static SynthesisKernels build(const SimConfig& config);
};

/// Log-correlated base field: idft(exp_kernel * h0_kernel * dft(dw_tilde)).
SampledPath synth_xtilde(const SimConfig& config, const NoisePair& noise,
                         const SynthesisKernels& kernels);
SampledPath synth_xtilde(const SimConfig& config, const NoisePair& noise);

/// Chaos weight M[t] = exp(gamma * xt[t] - gamma_sq * v), with v the
/// per-trajectory empirical mean of xt^2, or the supplied external value.
ChaosPath synth_chaos(const SimConfig& config, const SampledPath& x_tilde,
                      std::optional<double> external_variance = std::nullopt);

/// MfOU trajectory: idft(exp_kernel * fractional_kernel * dft(m .* dw)).
SampledPath synth_mfou(const SimConfig& config, const NoisePair& noise, const ChaosPath& m,
                       const SynthesisKernels& kernels);
SampledPath synth_mfou(const SimConfig& config, const NoisePair& noise, const ChaosPath& m);

/// Full pipeline for one ensemble member; bit-reproducible given
/// (config.seed, traj_index).
TrajectoryBundle synth_bundle(const SimConfig& config, std::size_t traj_index,
                              const SynthesisKernels& kernels);
TrajectoryBundle synth_bundle(const SimConfig& config, std::size_t traj_index);

}  // namespace mfou
