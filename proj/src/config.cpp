#include "mfou/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mfou {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::vector<std::string> validate(const SimConfig& c) {
  std::vector<std::string> errors;
  if (!is_power_of_two(c.n_points))
    errors.push_back("n_points is not a power of two");
  if (!(c.t_tot > 0.0) || !std::isfinite(c.t_tot))
    errors.push_back("t_tot not positive");
  if (!(c.t_large > 0.0) || !std::isfinite(c.t_large))
    errors.push_back("t_large not positive");
  if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon))
    errors.push_back("epsilon not positive");
  if (!(c.hurst > 0.0 && c.hurst < 1.0))
    errors.push_back("hurst outside (0,1)");
  if (!(c.gamma_sq >= 0.0) || !std::isfinite(c.gamma_sq))
    errors.push_back("gamma_sq negative");
  else if (c.gamma_sq >= 0.25)
    errors.push_back("gamma_sq >= 1/4");
  if (c.n_traj == 0)
    errors.push_back("n_traj not positive");
  if (is_power_of_two(c.n_points) && c.t_tot > 0.0) {
    if (c.epsilon < c.dt())
      errors.push_back("epsilon < dt (regularization not resolvable on the grid)");
    if (!(c.t_large < c.t_tot / 8.0))
      errors.push_back("t_large >= t_tot/8 (aliasing guard)");
  }
  return errors;
}

void validate_or_throw(const SimConfig& c) {
  const auto errors = validate(c);
  if (errors.empty()) return;
  std::string msg = "invalid SimConfig:";
  for (const auto& e : errors) msg += " [" + e + "]";
  throw std::invalid_argument(msg);
}

int max_even_moment(double hurst, double gamma_sq) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::domain_error("max_even_moment: hurst outside (0,1)");
  if (!(gamma_sq >= 0.0 && gamma_sq < 0.25))
    throw std::domain_error("max_even_moment: gamma_sq outside [0, 1/4)");
  if (gamma_sq == 0.0) return kAllMomentsFinite;
  // Largest n with n-1 strictly below hurst/gamma_sq.
  const double q = hurst / gamma_sq;
  double n_minus_1 = std::floor(q);
  if (n_minus_1 == q) n_minus_1 -= 1.0;
  const long n = std::max(1L, static_cast<long>(n_minus_1) + 1L);
  return static_cast<int>(2 * n);
}

SimConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  SimConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string key, value;
    std::istringstream ls(line);
    if (!std::getline(ls, key, '=')) continue;
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    if (key.empty()) continue;
    if (!std::getline(ls, value))
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": missing '='");
    trim(value);
    try {
      if (key == "n_points") c.n_points = std::stoull(value);
      else if (key == "t_tot") c.t_tot = std::stod(value);
      else if (key == "t_large") c.t_large = std::stod(value);
      else if (key == "epsilon") c.epsilon = std::stod(value);
      else if (key == "hurst") c.hurst = std::stod(value);
      else if (key == "gamma_sq") c.gamma_sq = std::stod(value);
      else if (key == "seed") c.seed = std::stoull(value);
      else if (key == "n_traj") c.n_traj = std::stoull(value);
      else throw std::runtime_error("unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": bad value for '" + key + "'");
    }
  }
  return c;
}

void save_config_file(const SimConfig& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path.string());
  out.precision(17);
  out << "n_points = " << c.n_points << "\n"
      << "t_tot = " << c.t_tot << "\n"
      << "t_large = " << c.t_large << "\n"
      << "epsilon = " << c.epsilon << "\n"
      << "hurst = " << c.hurst << "\n"
      << "gamma_sq = " << c.gamma_sq << "\n"
      << "seed = " << c.seed << "\n"
      << "n_traj = " << c.n_traj << "\n";
}

}  // namespace mfou
