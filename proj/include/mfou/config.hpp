#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mfou {

/// All synthesis parameters. Immutable after construction; shared freely.
struct SimConfig {
  std::size_t n_points = 1u << 21;  // DFT length, power of two
  double t_tot = 1.0;               // total period
  double t_large = 1.0 / 128.0;     // OU correlation time T
  double epsilon = 4.0 / (1u << 21);  // regularization scale (absolute time)
  double hurst = 0.5;               // H in (0,1)
  double gamma_sq = 0.0;            // intermittency parameter γ²
  std::uint64_t seed = 0x6d666f75u;
  std::size_t n_traj = 10;

  double dt() const { return t_tot / static_cast<double>(n_points); }
};

/// Sentinel for "all even moments finite" (Gaussian case, γ² = 0).
inline constexpr int kAllMomentsFinite = -1;

/// Empty list means the configuration is valid. Total function.
std::vector<std::string> validate(const SimConfig& config);

/// Throws std::invalid_argument listing every violated invariant.
void validate_or_throw(const SimConfig& config);

/// Largest even order 2n whose moment is guaranteed finite, i.e. the
/// largest n >= 1 with gamma_sq < hurst/(n-1). Returns kAllMomentsFinite
/// when gamma_sq = 0.
int max_even_moment(double hurst, double gamma_sq);

/// Flat key=value config file, keys: n_points, t_tot, t_large, epsilon,
/// hurst, gamma_sq, seed, n_traj. Unknown keys are an error.
SimConfig load_config_file(const std::filesystem::path& path);
void save_config_file(const SimConfig& config, const std::filesystem::path& path);

/// A uniformly sampled real-valued trajectory on the periodic grid.
struct SampledPath {
  std::vector<double> values;
  double dt = 0.0;
  SimConfig meta;
};

}  // namespace mfou
