#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mfou/config.hpp"

namespace mfou {

struct VerifyCheck {
  std::string name;
  double empirical = 0.0;
  double theoretical = 0.0;
  double tolerance = 0.0;  // |empirical - theoretical| bound (absolute or relative, per name)
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool overall() const;
};

struct VerifyOptions {
  SimConfig base;  // n_points, t_tot, t_large, epsilon, seed, n_traj are used
  std::vector<double> hursts{1.0 / 3.0, 0.5, 2.0 / 3.0};
  std::vector<double> gamma_sqs{0.0, 0.02, 0.04};
  int scales_per_octave = 2;
  bool with_oracle_checks = true;
};

/// Runs the full synthesize -> analyze -> theory comparison suite over the
/// (H, gamma_sq) grid. Deterministic for a fixed base seed. `log` (when
/// non-null) receives one progress line per stage.
VerifyReport run_verify(const VerifyOptions& options, std::ostream* log = nullptr);

std::string render_verify_text(const VerifyReport& report);
void write_verify_csv(const VerifyReport& report, const std::filesystem::path& path);

}  // namespace mfou
