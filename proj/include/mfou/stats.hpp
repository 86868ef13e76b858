#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mfou/config.hpp"

namespace mfou {

/// Per-scale empirical structure functions and derived flatness.
struct MomentTable {
  std::vector<double> scales;                   // strictly increasing
  std::map<int, std::vector<double>> s_n;       // order -> per-scale estimate
  std::vector<std::size_t> n_samples_per_scale;
  std::size_t ensemble_size = 0;
  double dt = 0.0;
};

struct FitResult {
  double exponent = 0.0;
  double log_amplitude = 0.0;
  std::pair<double, double> fit_range{0.0, 0.0};
  double residual_rms = 0.0;
};

struct Histogram {
  double scale = 0.0;
  std::vector<double> bin_edges;     // n_bins + 1 entries, in standardized units
  std::vector<std::size_t> counts;
  double sigma = 0.0;                // per-scale standard deviation used to rescale
};

struct HistogramSet {
  std::vector<Histogram> histograms;
};

/// Numerically stable sum (pairwise/cascade); order-independent to ~1e-15.
double pairwise_sum(std::span<const double> values);

/// Non-cyclic increments x[t + k] - x[t], tau = k dt; length n_points - k.
std::vector<double> increments(const SampledPath& path, double tau);

/// Ensemble structure functions: per-trajectory time average of increment
/// powers with the dt/(t_tot - tau) weighting, then a uniform mean over
/// trajectories.
MomentTable structure_function(std::span<const SampledPath> paths,
                               std::span<const int> orders,
                               std::span<const double> scales);

/// F(tau) = S4/(3 S2^2); requires orders 2 and 4 in the table.
std::vector<double> flatness(const MomentTable& table);

/// OLS fit of ln S_n against ln tau over scales inside fit_range.
FitResult fit_power_law(const MomentTable& table, int order,
                        std::pair<double, double> fit_range);

/// Per-scale histograms of increments standardized to unit variance over
/// the symmetric range [-8, 8].
HistogramSet pdf_histograms(std::span<const SampledPath> paths,
                            std::span<const double> scales, int n_bins);

/// Octave-spaced scale grid tau = 2^k dt spanning [dt, t_tot/4].
std::vector<double> default_scales(const SimConfig& config, int per_octave = 1);

}  // namespace mfou
