#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mfou/config.hpp"

namespace mfou {

/// The two independent discrete white noises driving one trajectory.
/// Each entry is a zero-mean Gaussian of variance dt.
struct NoisePair {
  std::vector<double> dw;        // drives the MfOU stage
  std::vector<double> dw_tilde;  // drives the log-correlated base field
  std::uint64_t seed = 0;
  std::size_t traj_index = 0;
};

/// Seed-reproducible Gaussian stream. Substream key = (seed, traj_index,
/// channel_id), mixed through SplitMix64 into an mt19937_64 seed; variates
/// come from the Marsaglia polar method driven by 53-bit uniforms. Both
/// pieces are fully specified, so output is bit-identical across platforms.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t traj_index, std::uint64_t channel_id);

  /// One standard normal variate.
  double next();

 private:
  double uniform_open();  // (-1, 1)

  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 output function; the documented mixing primitive for keying.
std::uint64_t splitmix64(std::uint64_t& state);

/// Fills both channels with i.i.d. N(0, dt) draws from disjoint substreams.
NoisePair generate_noise(const SimConfig& config, std::size_t traj_index);

}  // namespace mfou
