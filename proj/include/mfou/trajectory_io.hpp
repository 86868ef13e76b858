#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "mfou/config.hpp"
#include "mfou/synthesis.hpp"

namespace mfou {

/// Little-endian binary trajectory file: 8-byte magic "MFOUTRAJ", u32
/// version, then n_points (u64), dt, hurst, gamma_sq (f64), seed (u64),
/// traj_index (u64), followed by n_points f64 samples.
inline constexpr char kTrajectoryMagic[8] = {'M', 'F', 'O', 'U', 'T', 'R', 'A', 'J'};
inline constexpr std::uint32_t kTrajectoryVersion = 1;

struct TrajectoryHeader {
  std::uint64_t n_points = 0;
  double dt = 0.0;
  double hurst = 0.0;
  double gamma_sq = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t traj_index = 0;
};

void write_trajectory(const std::filesystem::path& path, const SampledPath& traj,
                      std::size_t traj_index);

SampledPath read_trajectory(const std::filesystem::path& path, TrajectoryHeader* header = nullptr);

/// CSV with columns index,time,value.
void write_trajectory_csv(const std::filesystem::path& path, const SampledPath& traj);

/// 64-bit FNV-1a over the file contents, hex-encoded.
std::string hash_file(const std::filesystem::path& path);

}  // namespace mfou
