#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mfou/noise.hpp"
#include "mfou/stats.hpp"

using namespace mfou;

namespace {

SimConfig noise_config() {
  SimConfig c;
  c.n_points = 1u << 18;
  c.t_tot = 1.0;
  c.t_large = 1.0 / 128.0;
  c.epsilon = 4.0 * c.dt();
  c.n_traj = 4;
  return c;
}

}  // namespace

TEST_CASE("splitmix64 is the reference sequence") {
  // Known outputs for state 0 (Vigna's reference implementation).
  std::uint64_t state = 0;
  CHECK(splitmix64(state) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(state) == 0x6e789e6aa1b965f4ULL);
  CHECK(splitmix64(state) == 0x06c45d188009454fULL);
}

TEST_CASE("noise generation is deterministic and substream-separated") {
  const SimConfig c = noise_config();
  const NoisePair a = generate_noise(c, 0);
  const NoisePair b = generate_noise(c, 0);
  CHECK(a.dw == b.dw);
  CHECK(a.dw_tilde == b.dw_tilde);

  const NoisePair other = generate_noise(c, 1);
  CHECK(a.dw != other.dw);
  CHECK(a.dw_tilde != other.dw_tilde);
  CHECK(a.dw != a.dw_tilde);

  SimConfig reseeded = c;
  reseeded.seed += 1;
  const NoisePair d = generate_noise(reseeded, 0);
  CHECK(a.dw != d.dw);
}

TEST_CASE("noise moments match N(0, dt)") {
  const SimConfig c = noise_config();
  const double n = static_cast<double>(c.n_points);
  for (std::size_t traj = 0; traj < 2; ++traj) {
    const NoisePair pair = generate_noise(c, traj);
    for (const auto* channel : {&pair.dw, &pair.dw_tilde}) {
      const double mean = pairwise_sum(*channel) / n;
      CHECK(std::abs(mean) < 4.0 * std::sqrt(c.dt() / n));
      std::vector<double> sq(channel->size());
      for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = (*channel)[i] * (*channel)[i];
      const double var = pairwise_sum(sq) / n - mean * mean;
      CHECK(var == doctest::Approx(c.dt()).epsilon(0.02));
    }
  }
}

TEST_CASE("the two channels are uncorrelated") {
  const SimConfig c = noise_config();
  const NoisePair pair = generate_noise(c, 0);
  const double n = static_cast<double>(c.n_points);
  std::vector<double> prod(pair.dw.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = pair.dw[i] * pair.dw_tilde[i];
  const double cross = pairwise_sum(prod) / n;
  // Correlation estimate scales like dt/sqrt(N).
  CHECK(std::abs(cross) < 4.0 * c.dt() / std::sqrt(n));
}

TEST_CASE("trajectory index is bounds-checked") {
  const SimConfig c = noise_config();
  CHECK_THROWS_AS(generate_noise(c, c.n_traj), std::domain_error);
}

TEST_CASE("gaussian stream has sane tails") {
  GaussianStream stream(123, 0, 0);
  int beyond_five_sigma = 0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    const double x = stream.next();
    CHECK(std::isfinite(x));
    if (std::abs(x) > 5.0) ++beyond_five_sigma;
  }
  CHECK(beyond_five_sigma <= 2);  // expected count ~0.1
}
