// Command-line front end: synth / theory / analyze / verify.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "mfou/config.hpp"
#include "mfou/stats.hpp"
#include "mfou/synthesis.hpp"
#include "mfou/theory.hpp"
#include "mfou/trajectory_io.hpp"
#include "mfou/verify.hpp"

namespace {

using json = nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_traj;
  std::optional<double> hurst;
  std::optional<double> gamma_sq;
  std::optional<int> epsilon_dt_multiple;
  std::optional<std::size_t> n_points;
  std::optional<double> t_tot;
  std::optional<double> t_large;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key=value config file");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "base RNG seed");
  cmd->add_option("--n-traj", flags.n_traj, "ensemble size");
  cmd->add_option("--hurst", flags.hurst, "Hurst exponent in (0,1)");
  cmd->add_option("--gamma-sq", flags.gamma_sq, "intermittency parameter");
  cmd->add_option("--epsilon-dt-multiple", flags.epsilon_dt_multiple,
                  "set epsilon to this multiple of dt (default config uses 4)");
  cmd->add_option("--n-points", flags.n_points, "grid size (power of two)");
  cmd->add_option("--t-tot", flags.t_tot, "total period");
  cmd->add_option("--t-large", flags.t_large, "OU correlation time T");
}

mfou::SimConfig resolve_config(const CommonFlags& flags) {
  mfou::SimConfig cfg;
  if (!flags.config_path.empty()) cfg = mfou::load_config_file(flags.config_path);
  if (flags.n_points) cfg.n_points = *flags.n_points;
  if (flags.t_tot) cfg.t_tot = *flags.t_tot;
  if (flags.t_large) cfg.t_large = *flags.t_large;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.n_traj) cfg.n_traj = *flags.n_traj;
  if (flags.hurst) cfg.hurst = *flags.hurst;
  if (flags.gamma_sq) cfg.gamma_sq = *flags.gamma_sq;
  if (flags.epsilon_dt_multiple)
    cfg.epsilon = static_cast<double>(*flags.epsilon_dt_multiple) * cfg.dt();
  else if (flags.n_points || flags.t_tot)
    cfg.epsilon = std::max(cfg.epsilon, 4.0 * cfg.dt());
  return cfg;
}

json config_to_json(const mfou::SimConfig& cfg) {
  return json{{"n_points", cfg.n_points}, {"t_tot", cfg.t_tot},
              {"t_large", cfg.t_large},   {"epsilon", cfg.epsilon},
              {"hurst", cfg.hurst},       {"gamma_sq", cfg.gamma_sq},
              {"seed", cfg.seed},         {"n_traj", cfg.n_traj}};
}

std::vector<double> parse_scales(const std::string& spec, const mfou::SimConfig& cfg) {
  if (spec.empty()) return mfou::default_scales(cfg, 2);
  double lo = 0.0, hi = 0.0;
  int per_octave = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi >> c2 >> per_octave) || c1 != ':' || c2 != ':' ||
      per_octave < 1 || !(lo > 0.0) || !(hi >= lo))
    throw CLI::ValidationError("--scales expects min:max:per-octave");
  const double dt = cfg.dt();
  std::vector<double> scales;
  std::size_t last_k = 0;
  for (int j = 0;; ++j) {
    const double tau = lo * std::pow(2.0, static_cast<double>(j) / per_octave);
    if (tau > hi * (1.0 + 1e-12)) break;
    const auto k = static_cast<std::size_t>(std::round(tau / dt));
    if (k >= 1 && k != last_k) {
      scales.push_back(static_cast<double>(k) * dt);
      last_k = k;
    }
  }
  if (scales.empty()) throw CLI::ValidationError("--scales produced no grid-aligned scales");
  return scales;
}

int cmd_synth(const CommonFlags& flags) {
  const mfou::SimConfig cfg = resolve_config(flags);
  mfou::validate_or_throw(cfg);
  const std::filesystem::path out(flags.out_dir);
  std::filesystem::create_directories(out);

  const mfou::SynthesisKernels kernels = mfou::SynthesisKernels::build(cfg);
  json manifest;
  manifest["config"] = config_to_json(cfg);
  json files = json::array();
  double var_mean = 0.0;
  for (std::size_t i = 0; i < cfg.n_traj; ++i) {
    const mfou::TrajectoryBundle bundle = mfou::synth_bundle(cfg, i, kernels);
    std::ostringstream name;
    name << "traj_" << std::setw(4) << std::setfill('0') << i << ".bin";
    const auto path = out / name.str();
    mfou::write_trajectory(path, bundle.x, i);
    files.push_back({{"file", name.str()}, {"hash", mfou::hash_file(path)}});
    double xx = 0.0;
    for (const double x : bundle.x.values) xx += x * x;
    var_mean += xx / static_cast<double>(bundle.x.values.size());
    std::cout << "wrote " << path.string() << "\n";
  }
  var_mean /= static_cast<double>(cfg.n_traj);
  manifest["files"] = files;
  manifest["summary"] = {
      {"empirical_variance", var_mean},
      {"theoretical_variance", mfou::fou_variance(cfg.hurst, cfg.t_large)}};
  std::ofstream mf(out / "manifest.json");
  mf << manifest.dump(2) << "\n";
  std::cout << "wrote " << (out / "manifest.json").string() << "\n";
  return 0;
}

int cmd_theory(const CommonFlags& flags, const std::vector<int>& orders_in) {
  const mfou::SimConfig cfg = resolve_config(flags);
  mfou::validate_or_throw(cfg);
  std::vector<int> orders = orders_in;
  if (orders.empty()) orders = {2, 4};
  const mfou::TheoryReport report = mfou::make_theory_report(cfg, orders);

  const std::filesystem::path out(flags.out_dir);
  std::filesystem::create_directories(out);
  std::ofstream csv(out / "theory_report.csv");
  csv.precision(12);
  csv << "quantity,parameter,value,error\n";
  csv << "variance,," << report.variance << ",0\n";
  for (const auto& [tau, v] : report.covariance_samples)
    csv << "covariance," << tau << ',' << v.value << ',' << v.error << "\n";
  csv << "c2,," << report.c2 << ",0\n";
  for (const auto& [order, c] : report.c2n)
    csv << "c" << order << ",," << c.value << ',' << c.error << "\n";
  for (const auto& [order, se] : report.s2n_scaling)
    csv << "s" << order << "_scaling,exponent=" << se.first << ',' << se.second << ",0\n";
  csv << "flatness_exponent,," << report.flatness_exponent << ",0\n";
  csv << "flatness_amplitude,," << report.flatness_amplitude << ",0\n";

  std::cout << std::setprecision(8) << "variance          " << report.variance << "\n"
            << "c2                " << report.c2 << "\n";
  for (const auto& [order, c] : report.c2n)
    std::cout << "c" << order << "                " << c.value << " +- " << c.error
              << "\n";
  for (const auto& [order, se] : report.s2n_scaling)
    std::cout << "S" << order << " ~ " << se.second << " * tau^" << se.first << "\n";
  std::cout << "flatness ~ " << report.flatness_amplitude << " * (tau/T)^"
            << report.flatness_exponent << "\n";
  std::cout << "wrote " << (out / "theory_report.csv").string() << "\n";
  return 0;
}

int cmd_analyze(const std::vector<std::string>& traj_files, const std::string& scale_spec,
                std::vector<int> orders, bool oracle, const std::string& out_dir) {
  if (traj_files.empty()) throw CLI::ValidationError("analyze: no trajectory files given");
  std::vector<mfou::SampledPath> paths;
  mfou::TrajectoryHeader first{};
  for (const auto& file : traj_files) {
    mfou::TrajectoryHeader h;
    paths.push_back(mfou::read_trajectory(file, &h));
    if (paths.size() == 1) {
      first = h;
    } else if (h.n_points != first.n_points || h.dt != first.dt ||
               h.hurst != first.hurst || h.gamma_sq != first.gamma_sq ||
               h.seed != first.seed) {
      throw std::runtime_error("analyze: mixed-config trajectory inputs rejected (" +
                               file + ")");
    }
  }
  if (orders.empty()) orders = {2, 3, 4};
  mfou::SimConfig scale_cfg;  // only n_points and t_tot matter for the scale grid
  scale_cfg.n_points = first.n_points;
  scale_cfg.t_tot = first.dt * static_cast<double>(first.n_points);
  const std::vector<double> scales = parse_scales(scale_spec, scale_cfg);

  const mfou::MomentTable table = mfou::structure_function(paths, orders, scales);

  if (oracle) {
    if (first.n_points > 4096)
      throw std::runtime_error("analyze --oracle: refuse brute force above N=4096");
    for (std::size_t si = 0; si < scales.size(); ++si) {
      const auto k = static_cast<std::size_t>(std::round(scales[si] / first.dt));
      for (const int order : orders) {
        double acc = 0.0;
        std::size_t cnt = 0;
        for (const auto& p : paths) {
          for (std::size_t t = 0; t + k < p.values.size(); ++t) {
            double pw = 1.0;
            const double d = p.values[t + k] - p.values[t];
            for (int e = 0; e < order; ++e) pw *= d;
            acc += pw;
            ++cnt;
          }
        }
        acc /= static_cast<double>(cnt);
        if (std::abs(acc - table.s_n.at(order)[si]) > 1e-12)
          throw std::runtime_error("analyze --oracle: mismatch vs brute force");
      }
    }
    std::cout << "oracle cross-check passed\n";
  }

  const std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);
  {
    std::ofstream csv(out / "moments.csv");
    csv.precision(12);
    csv << "tau,order,value,n_samples\n";
    for (std::size_t si = 0; si < table.scales.size(); ++si)
      for (const auto& [order, values] : table.s_n)
        csv << table.scales[si] << ',' << order << ',' << values[si] << ','
            << table.n_samples_per_scale[si] << '\n';
  }
  const bool have_flatness =
      table.s_n.count(2) != 0 && table.s_n.count(4) != 0;
  if (have_flatness) {
    const std::vector<double> f = mfou::flatness(table);
    std::ofstream csv(out / "flatness.csv");
    csv.precision(12);
    csv << "tau,F\n";
    for (std::size_t si = 0; si < table.scales.size(); ++si)
      csv << table.scales[si] << ',' << f[si] << '\n';
  } else {
    std::cerr << "warning: orders 2 and 4 not both requested; flatness omitted\n";
  }
  {
    const mfou::HistogramSet hist = mfou::pdf_histograms(paths, scales, 64);
    std::ofstream csv(out / "histograms.csv");
    csv.precision(12);
    csv << "scale,bin_left,bin_right,count,density\n";
    for (const auto& h : hist.histograms) {
      std::size_t total = 0;
      for (const auto c : h.counts) total += c;
      for (std::size_t b = 0; b < h.counts.size(); ++b) {
        const double width = h.bin_edges[b + 1] - h.bin_edges[b];
        const double density =
            static_cast<double>(h.counts[b]) / (static_cast<double>(total) * width);
        csv << h.scale << ',' << h.bin_edges[b] << ',' << h.bin_edges[b + 1] << ','
            << h.counts[b] << ',' << density << '\n';
      }
    }
  }
  std::cout << "wrote " << (out / "moments.csv").string() << "\n";
  return 0;
}

int cmd_verify(const CommonFlags& flags) {
  mfou::VerifyOptions options;
  options.base = resolve_config(flags);
  if (flags.hurst) options.hursts = {*flags.hurst};
  if (flags.gamma_sq) options.gamma_sqs = {*flags.gamma_sq};
  const mfou::VerifyReport report = mfou::run_verify(options, &std::cerr);
  const std::string text = mfou::render_verify_text(report);
  std::cout << text;
  const std::filesystem::path out(flags.out_dir);
  std::filesystem::create_directories(out);
  mfou::write_verify_csv(report, out / "verify_report.csv");
  std::ofstream(out / "verify_report.txt") << text;
  return report.overall() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statistically stationary multifractal fOU synthesis and verification"};
  app.require_subcommand(1);

  CommonFlags synth_flags, theory_flags, verify_flags;
  std::vector<int> theory_orders, analyze_orders;
  std::vector<std::string> traj_files;
  std::string scale_spec, analyze_out = ".";
  bool oracle = false;

  auto* synth = app.add_subcommand("synth", "generate trajectory files + manifest");
  add_common_flags(synth, synth_flags);

  auto* theory = app.add_subcommand("theory", "evaluate theoretical predictions");
  add_common_flags(theory, theory_flags);
  theory->add_option("--orders", theory_orders, "even moment orders (e.g. 2 4)");

  auto* analyze = app.add_subcommand("analyze", "structure functions from trajectories");
  analyze->add_option("files", traj_files, "trajectory .bin files")->required();
  analyze->add_option("--scales", scale_spec, "min:max:per-octave");
  analyze->add_option("--orders", analyze_orders, "moment orders");
  analyze->add_flag("--oracle", oracle, "brute-force cross-check (small N only)");
  analyze->add_option("--out", analyze_out, "output directory");

  auto* verify = app.add_subcommand("verify", "full synthesize/analyze/theory comparison");
  add_common_flags(verify, verify_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_flags);
    if (theory->parsed()) return cmd_theory(theory_flags, theory_orders);
    if (analyze->parsed())
      return cmd_analyze(traj_files, scale_spec, analyze_orders, oracle, analyze_out);
    if (verify->parsed()) return cmd_verify(verify_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
