#include "mfou/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mfou {

namespace {

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double total() const { return sum + comp; }
};

std::size_t scale_to_lag(double tau, double dt, std::size_t n_points) {
  const double k_real = tau / dt;
  const double k_round = std::round(k_real);
  if (k_round < 1.0 || std::abs(k_real - k_round) > 1e-6 * std::max(1.0, k_real))
    throw std::domain_error("scale " + std::to_string(tau) +
                            " is not a positive grid multiple of dt");
  const auto k = static_cast<std::size_t>(k_round);
  if (k >= n_points) throw std::domain_error("scale exceeds the trajectory length");
  return k;
}

double int_pow(double x, int n) {
  double result = 1.0;
  double base = x;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) result *= base;
    base *= base;
  }
  return result;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    CompensatedSum acc;
    for (const double v : values) acc.add(v);
    return acc.total();
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::vector<double> increments(const SampledPath& path, double tau) {
  const std::size_t k = scale_to_lag(tau, path.dt, path.values.size());
  std::vector<double> out(path.values.size() - k);
  for (std::size_t t = 0; t < out.size(); ++t)
    out[t] = path.values[t + k] - path.values[t];
  return out;
}

MomentTable structure_function(std::span<const SampledPath> paths,
                               std::span<const int> orders,
                               std::span<const double> scales) {
  if (paths.empty() || orders.empty() || scales.empty())
    throw std::domain_error("structure_function: empty input");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] > scales[i - 1]))
      throw std::domain_error("structure_function: scales must be strictly increasing");

  MomentTable table;
  table.scales.assign(scales.begin(), scales.end());
  table.ensemble_size = paths.size();
  table.dt = paths.front().dt;
  table.n_samples_per_scale.assign(scales.size(), 0);
  for (const int order : orders)
    table.s_n[order].assign(scales.size(), 0.0);

  const std::size_t n = paths.front().values.size();
  for (const auto& path : paths)
    if (path.values.size() != n || path.dt != table.dt)
      throw std::domain_error("structure_function: paths share no common grid");

  for (std::size_t si = 0; si < scales.size(); ++si) {
    const std::size_t k = scale_to_lag(scales[si], table.dt, n);
    const std::size_t count = n - k;
    table.n_samples_per_scale[si] = count * paths.size();
    for (const auto& path : paths) {
      std::vector<CompensatedSum> acc(orders.size());
      const double* x = path.values.data();
      for (std::size_t t = 0; t < count; ++t) {
        const double d = x[t + k] - x[t];
        for (std::size_t oi = 0; oi < orders.size(); ++oi)
          acc[oi].add(int_pow(d, orders[oi]));
      }
      // dt/(t_tot - tau) equals 1/(n - k) on the uniform grid.
      const double weight = 1.0 / static_cast<double>(count);
      for (std::size_t oi = 0; oi < orders.size(); ++oi)
        table.s_n[orders[oi]][si] += weight * acc[oi].total();
    }
    for (std::size_t oi = 0; oi < orders.size(); ++oi)
      table.s_n[orders[oi]][si] /= static_cast<double>(paths.size());
  }
  return table;
}

std::vector<double> flatness(const MomentTable& table) {
  const auto s2 = table.s_n.find(2);
  const auto s4 = table.s_n.find(4);
  if (s2 == table.s_n.end() || s4 == table.s_n.end())
    throw std::domain_error("flatness: table lacks order 2 or order 4");
  std::vector<double> f(table.scales.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v2 = s2->second[i];
    if (v2 == 0.0)
      throw std::runtime_error("flatness: S2 vanishes at scale " +
                               std::to_string(table.scales[i]));
    f[i] = s4->second[i] / (3.0 * v2 * v2);
  }
  return f;
}

FitResult fit_power_law(const MomentTable& table, int order,
                        std::pair<double, double> fit_range) {
  const auto it = table.s_n.find(order);
  if (it == table.s_n.end())
    throw std::domain_error("fit_power_law: order missing from table");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < table.scales.size(); ++i) {
    const double tau = table.scales[i];
    if (tau < fit_range.first || tau > fit_range.second) continue;
    const double s = it->second[i];
    if (!(s > 0.0))
      throw std::runtime_error("fit_power_law: non-positive moment at scale " +
                               std::to_string(tau));
    lx.push_back(std::log(tau));
    ly.push_back(std::log(s));
  }
  if (lx.size() < 5)
    throw std::invalid_argument("fit_power_law: fewer than 5 scales in fit range");
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  FitResult fit;
  fit.exponent = sxy / sxx;
  fit.log_amplitude = my - fit.exponent * mx;
  fit.fit_range = fit_range;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.log_amplitude + fit.exponent * lx[i]);
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  return fit;
}

HistogramSet pdf_histograms(std::span<const SampledPath> paths,
                            std::span<const double> scales, int n_bins) {
  if (n_bins < 16) throw std::domain_error("pdf_histograms: n_bins must be >= 16");
  if (paths.empty()) throw std::domain_error("pdf_histograms: no paths");
  HistogramSet set;
  for (const double tau : scales) {
    Histogram h;
    h.scale = tau;
    // Pooled standard deviation across the ensemble at this scale.
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (const auto& path : paths) {
      for (const double d : increments(path, tau)) {
        sum += d;
        sum_sq += d * d;
        ++count;
      }
    }
    const double mean = sum / static_cast<double>(count);
    const double var = sum_sq / static_cast<double>(count) - mean * mean;
    if (!(var > 0.0))
      throw std::runtime_error("pdf_histograms: degenerate variance at scale " +
                               std::to_string(tau));
    h.sigma = std::sqrt(var);
    h.bin_edges.resize(n_bins + 1);
    for (int b = 0; b <= n_bins; ++b)
      h.bin_edges[b] = -8.0 + 16.0 * static_cast<double>(b) / n_bins;
    h.counts.assign(n_bins, 0);
    for (const auto& path : paths) {
      for (const double d : increments(path, tau)) {
        const double z = d / h.sigma;
        int b = static_cast<int>(std::floor((z + 8.0) / 16.0 * n_bins));
        b = std::clamp(b, 0, n_bins - 1);  // outliers land in the edge bins
        ++h.counts[static_cast<std::size_t>(b)];
      }
    }
    set.histograms.push_back(std::move(h));
  }
  return set;
}

std::vector<double> default_scales(const SimConfig& config, int per_octave) {
  if (per_octave < 1) throw std::domain_error("default_scales: per_octave must be >= 1");
  const double dt = config.dt();
  const double tau_max = config.t_tot / 4.0;
  std::vector<double> scales;
  std::size_t last_k = 0;
  for (int j = 0;; ++j) {
    const double factor = std::pow(2.0, static_cast<double>(j) / per_octave);
    const auto k = static_cast<std::size_t>(std::round(factor));
    const double tau = static_cast<double>(k) * dt;
    if (tau > tau_max) break;
    if (k != last_k) {
      scales.push_back(tau);
      last_k = k;
    }
  }
  return scales;
}

}  // namespace mfou
