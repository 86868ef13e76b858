#include "mfou/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace mfou {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t traj_index,
                               std::uint64_t channel_id) {
  // Key the substream: fold each component through SplitMix64 in turn.
  std::uint64_t state = seed;
  (void)splitmix64(state);
  state ^= traj_index;
  (void)splitmix64(state);
  state ^= channel_id;
  const std::uint64_t engine_seed = splitmix64(state);
  engine_.seed(engine_seed);
}

double GaussianStream::uniform_open() {
  // 53-bit mantissa uniform in [0,1), mapped to (-1,1).
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

double GaussianStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double x, y, s;
  do {
    x = uniform_open();
    y = uniform_open();
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = y * f;
  has_cached_ = true;
  return x * f;
}

NoisePair generate_noise(const SimConfig& config, std::size_t traj_index) {
  if (traj_index >= config.n_traj)
    throw std::domain_error("generate_noise: traj_index out of range");
  const double sigma = std::sqrt(config.dt());
  NoisePair pair;
  pair.seed = config.seed;
  pair.traj_index = traj_index;
  pair.dw.resize(config.n_points);
  pair.dw_tilde.resize(config.n_points);
  GaussianStream g_w(config.seed, traj_index, 0);
  GaussianStream g_wt(config.seed, traj_index, 1);
  for (std::size_t i = 0; i < config.n_points; ++i) pair.dw[i] = sigma * g_w.next();
  for (std::size_t i = 0; i < config.n_points; ++i) pair.dw_tilde[i] = sigma * g_wt.next();
  return pair;
}

}  // namespace mfou
