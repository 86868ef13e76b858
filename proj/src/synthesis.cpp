#include "mfou/synthesis.hpp"

#include <cmath>
#include <stdexcept>

namespace mfou {

namespace {

// idft(exp_kernel * weight_kernel * dft(driving)); the single dt of the
// estimator is already folded into the weight kernel spectrum.
std::vector<double> filter_noise(const KernelSpectrum& exponential,
                                 const KernelSpectrum& weight,
                                 std::span<const double> driving) {
  Spectrum s = dft(driving);
  for (std::size_t k = 0; k < s.size(); ++k)
    s.coeffs[k] *= exponential.spec.coeffs[k] * weight.spec.coeffs[k];
  return idft(s);
}

}  // namespace

SynthesisKernels SynthesisKernels::build(const SimConfig& config) {
  return {kernel_spectrum_exponential(config), kernel_spectrum_fractional(config),
          kernel_spectrum_h0(config)};
}

SampledPath synth_xtilde(const SimConfig& config, const NoisePair& noise,
                         const SynthesisKernels& kernels) {
  validate_or_throw(config);
  if (noise.dw_tilde.size() != config.n_points)
    throw std::invalid_argument("synth_xtilde: noise length mismatch");
  SampledPath path;
  path.values = filter_noise(kernels.exponential, kernels.h0, noise.dw_tilde);
  path.dt = config.dt();
  path.meta = config;
  return path;
}

SampledPath synth_xtilde(const SimConfig& config, const NoisePair& noise) {
  return synth_xtilde(config, noise, SynthesisKernels::build(config));
}

ChaosPath synth_chaos(const SimConfig& config, const SampledPath& x_tilde,
                      std::optional<double> external_variance) {
  if (config.gamma_sq < 0.0)
    throw std::domain_error("synth_chaos: gamma_sq negative");
  ChaosPath m;
  m.gamma_sq = config.gamma_sq;
  m.values.assign(x_tilde.values.size(), 1.0);
  if (config.gamma_sq == 0.0) {
    m.normalization_used = ChaosNormalization::empirical_variance;
    return m;
  }
  double v;
  if (external_variance) {
    v = *external_variance;
    m.normalization_used = ChaosNormalization::external_value;
  } else {
    // Per-trajectory empirical mean of xt^2.
    double acc = 0.0;
    for (const double x : x_tilde.values) acc += x * x;
    v = acc / static_cast<double>(x_tilde.values.size());
    m.normalization_used = ChaosNormalization::empirical_variance;
  }
  const double gamma = std::sqrt(config.gamma_sq);
  const double shift = config.gamma_sq * v;
  for (std::size_t i = 0; i < m.values.size(); ++i)
    m.values[i] = std::exp(gamma * x_tilde.values[i] - shift);
  return m;
}

SampledPath synth_mfou(const SimConfig& config, const NoisePair& noise, const ChaosPath& m,
                       const SynthesisKernels& kernels) {
  validate_or_throw(config);
  if (noise.dw.size() != config.n_points || m.values.size() != config.n_points)
    throw std::invalid_argument("synth_mfou: input length mismatch");
  std::vector<double> driving(config.n_points);
  for (std::size_t i = 0; i < config.n_points; ++i)
    driving[i] = m.values[i] * noise.dw[i];
  SampledPath path;
  path.values = filter_noise(kernels.exponential, kernels.fractional, driving);
  path.dt = config.dt();
  path.meta = config;
  return path;
}

SampledPath synth_mfou(const SimConfig& config, const NoisePair& noise, const ChaosPath& m) {
  return synth_mfou(config, noise, m, SynthesisKernels::build(config));
}

TrajectoryBundle synth_bundle(const SimConfig& config, std::size_t traj_index,
                              const SynthesisKernels& kernels) {
  const NoisePair noise = generate_noise(config, traj_index);
  TrajectoryBundle bundle;
  bundle.traj_index = traj_index;
  bundle.x_tilde = synth_xtilde(config, noise, kernels);
  bundle.m = synth_chaos(config, bundle.x_tilde);
  bundle.x = synth_mfou(config, noise, bundle.m, kernels);
  return bundle;
}

TrajectoryBundle synth_bundle(const SimConfig& config, std::size_t traj_index) {
  return synth_bundle(config, traj_index, SynthesisKernels::build(config));
}

}  // namespace mfou
