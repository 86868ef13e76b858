#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "mfou/synthesis.hpp"
#include "mfou/trajectory_io.hpp"

using namespace mfou;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "mfou_io_test") {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SimConfig io_config() {
  SimConfig c;
  c.n_points = 1u << 10;
  c.t_tot = 1.0;
  c.t_large = 1.0 / 64.0;
  c.epsilon = 4.0 * c.dt();
  c.hurst = 1.0 / 3.0;
  c.gamma_sq = 0.04;
  c.n_traj = 2;
  return c;
}

}  // namespace

TEST_CASE("trajectory binary round trip is bit exact") {
  TempDir dir;
  const SimConfig c = io_config();
  const TrajectoryBundle bundle = synth_bundle(c, 1);
  const auto file = dir.path / "traj.bin";
  write_trajectory(file, bundle.x, 1);

  TrajectoryHeader header;
  const SampledPath back = read_trajectory(file, &header);
  CHECK(header.n_points == c.n_points);
  CHECK(header.dt == c.dt());
  CHECK(header.hurst == c.hurst);
  CHECK(header.gamma_sq == c.gamma_sq);
  CHECK(header.seed == c.seed);
  CHECK(header.traj_index == 1);
  REQUIRE(back.values.size() == bundle.x.values.size());
  CHECK(back.values == bundle.x.values);  // exact doubles, no rounding
  CHECK(back.dt == bundle.x.dt);
}

TEST_CASE("file hash is stable and content sensitive") {
  TempDir dir;
  const SimConfig c = io_config();
  const TrajectoryBundle bundle = synth_bundle(c, 0);
  const auto a = dir.path / "a.bin";
  const auto b = dir.path / "b.bin";
  write_trajectory(a, bundle.x, 0);
  write_trajectory(b, bundle.x, 0);
  const std::string ha = hash_file(a);
  CHECK(ha.size() == 16);
  CHECK(ha == hash_file(b));

  write_trajectory(b, bundle.x_tilde, 0);
  CHECK(ha != hash_file(b));

  // FNV-1a of a known payload.
  const auto known = dir.path / "known.txt";
  std::ofstream(known, std::ios::binary) << "hello";
  CHECK(hash_file(known) == "a430d84680aabd0b");
}

TEST_CASE("corrupt headers are rejected") {
  TempDir dir;
  const SimConfig c = io_config();
  const TrajectoryBundle bundle = synth_bundle(c, 0);
  const auto file = dir.path / "traj.bin";
  write_trajectory(file, bundle.x, 0);

  // Flip a magic byte.
  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
  }
  CHECK_THROWS(read_trajectory(file));

  // Truncated payload.
  const auto partial = dir.path / "partial.bin";
  {
    std::ifstream in(file, std::ios::binary);
    std::ofstream out(partial, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), {});
    bytes[0] = 'M';  // restore magic, then truncate
    out << bytes.substr(0, bytes.size() / 2);
  }
  CHECK_THROWS(read_trajectory(partial));

  CHECK_THROWS(read_trajectory(dir.path / "missing.bin"));
}

TEST_CASE("csv export") {
  TempDir dir;
  const SimConfig c = io_config();
  const TrajectoryBundle bundle = synth_bundle(c, 0);
  const auto file = dir.path / "traj.csv";
  write_trajectory_csv(file, bundle.x);

  std::ifstream in(file);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "index,time,value");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == c.n_points);
}
