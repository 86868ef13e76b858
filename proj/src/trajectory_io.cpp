#include "mfou/trajectory_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mfou {

static_assert(std::endian::native == std::endian::little,
              "trajectory format is little-endian; byte swapping not implemented");

namespace {

template <class T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
void get(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
}

}  // namespace

void write_trajectory(const std::filesystem::path& path, const SampledPath& traj,
                      std::size_t traj_index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(kTrajectoryMagic, sizeof(kTrajectoryMagic));
  put(out, kTrajectoryVersion);
  put(out, static_cast<std::uint64_t>(traj.values.size()));
  put(out, traj.dt);
  put(out, traj.meta.hurst);
  put(out, traj.meta.gamma_sq);
  put(out, static_cast<std::uint64_t>(traj.meta.seed));
  put(out, static_cast<std::uint64_t>(traj_index));
  out.write(reinterpret_cast<const char*>(traj.values.data()),
            static_cast<std::streamsize>(traj.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SampledPath read_trajectory(const std::filesystem::path& path, TrajectoryHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kTrajectoryMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a trajectory file: " + path.string());
  std::uint32_t version = 0;
  get(in, version);
  if (version != kTrajectoryVersion)
    throw std::runtime_error("unsupported trajectory version in " + path.string());
  TrajectoryHeader h;
  get(in, h.n_points);
  get(in, h.dt);
  get(in, h.hurst);
  get(in, h.gamma_sq);
  get(in, h.seed);
  get(in, h.traj_index);
  SampledPath traj;
  traj.dt = h.dt;
  traj.meta.hurst = h.hurst;
  traj.meta.gamma_sq = h.gamma_sq;
  traj.meta.seed = h.seed;
  traj.values.resize(h.n_points);
  in.read(reinterpret_cast<char*>(traj.values.data()),
          static_cast<std::streamsize>(h.n_points * sizeof(double)));
  if (!in) throw std::runtime_error("truncated trajectory file: " + path.string());
  if (header) *header = h;
  return traj;
}

void write_trajectory_csv(const std::filesystem::path& path, const SampledPath& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.precision(17);
  out << "index,time,value\n";
  for (std::size_t i = 0; i < traj.values.size(); ++i)
    out << i << ',' << static_cast<double>(i) * traj.dt << ',' << traj.values[i] << '\n';
}

std::string hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash: " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buffer[static_cast<std::size_t>(i)]);
      h *= 0x100000001b3ull;
    }
  }
  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << h;
  return hex.str();
}

}  // namespace mfou
