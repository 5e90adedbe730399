#pragma once

// Run configuration: a flat text file of `key = value` lines.
//
//   line     := blank | comment | entry
//   comment  := '#' any*
//   entry    := key ws* '=' ws* value ws* comment?
//   key      := one of the keys listed in RunConfig::keys()
//   value    := number | bool | word | list
//   number   := decimal or exponent form accepted by strtod
//   bool     := 'true' | 'false'
//   list     := number (',' number)*      (may be empty for evolution.checkpoints)
//
// Every key is optional and falls back to its default; unknown or repeated keys
// are errors. serialize() writes every key, and parse(serialize(c)) == c.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"

namespace fracburgers {

struct RunConfig {
  std::string experiment = "default";
  double lambda = 0.5;
  double grid_h = 0.02;
  double grid_L = 20.0;

  std::vector<double> eps_list{0.1, 0.05, 0.02, 0.01};
  std::string n_rule = "auto";  // "auto" or a fixed integer >= 2 (raised to keep C(n, eps) >= 2L)
  double damping = 0.5;
  double tol_fp = 1e-10;
  long max_iter = 20000;
  double linear_solver_tol = 1e-10;
  bool warm_start = true;

  double t_end = 0.5;
  std::vector<double> checkpoints;  // empty: every checkpoint_step up to t_end
  double checkpoint_step = 0.01;
  double cfl_safety = 0.9;
  double evolution_epsilon = 0.0;
  bool fractal_enabled = true;
  std::string initial_data = "stationary";  // stationary | sign | minus_sign

  std::string stationary_input;  // CSV written by the stationary command
  bool inline_solve = true;

  std::string output_dir = "out";

  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> k{
        "experiment",         "lambda",
        "grid.h",             "grid.L",
        "stationary.eps_list", "stationary.n_rule",
        "stationary.damping", "stationary.tol_fp",
        "stationary.max_iter", "stationary.linear_solver_tol",
        "stationary.warm_start", "evolution.t_end",
        "evolution.checkpoints", "evolution.checkpoint_step",
        "evolution.cfl_safety", "evolution.epsilon",
        "evolution.fractal_enabled", "evolution.initial_data",
        "demo.stationary_input", "demo.inline_solve",
        "output.dir"};
    return k;
  }

  int fixed_n() const {
    if (n_rule == "auto") return 2;
    return static_cast<int>(parse_double(n_rule));
  }

  /// Record times: the explicit list, or k * checkpoint_step for k = 1, 2, ...
  std::vector<double> record_times() const {
    if (!checkpoints.empty()) return checkpoints;
    std::vector<double> out;
    const long n = std::lround(t_end / checkpoint_step);
    for (long i = 1; i <= n; ++i) out.push_back(std::min(t_end, static_cast<double>(i) * checkpoint_step));
    if (out.empty() || out.back() < t_end) out.push_back(t_end);
    return out;
  }

  void validate() const {
    auto need = [](bool ok, const std::string& what) {
      if (!ok) throw ConfigError(what);
    };
    need(!experiment.empty(), "experiment must be non-empty");
    need(lambda > 0.0 && lambda < 1.0, "lambda must lie in (0, 1)");
    need(grid_h > 0.0 && std::isfinite(grid_h), "grid.h must be positive");
    need(grid_L >= 4.0 * grid_h && std::isfinite(grid_L), "grid.L must cover at least 4 cells");
    need(!eps_list.empty(), "stationary.eps_list must be non-empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
      need(eps_list[i] > 0.0, "stationary.eps_list entries must be positive");
      if (i > 0) need(eps_list[i] < eps_list[i - 1], "stationary.eps_list must be strictly descending");
    }
    if (n_rule != "auto") {
      const double n = parse_double(n_rule);
      need(n >= 2.0 && n == std::floor(n) && n < 1e6, "stationary.n_rule must be 'auto' or an integer >= 2");
    }
    need(damping > 0.0 && damping <= 1.0, "stationary.damping must lie in (0, 1]");
    need(tol_fp > 0.0, "stationary.tol_fp must be positive");
    need(max_iter > 0, "stationary.max_iter must be positive");
    need(linear_solver_tol > 0.0, "stationary.linear_solver_tol must be positive");
    need(t_end > 0.0, "evolution.t_end must be positive");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      need(checkpoints[i] > 0.0 && checkpoints[i] <= t_end, "evolution.checkpoints must lie in (0, t_end]");
      if (i > 0) need(checkpoints[i] > checkpoints[i - 1], "evolution.checkpoints must be ascending");
    }
    need(checkpoint_step > 0.0, "evolution.checkpoint_step must be positive");
    need(cfl_safety > 0.0 && cfl_safety <= 1.0, "evolution.cfl_safety must lie in (0, 1]");
    need(evolution_epsilon >= 0.0, "evolution.epsilon must be >= 0");
    need(initial_data == "stationary" || initial_data == "sign" || initial_data == "minus_sign",
         "evolution.initial_data must be stationary, sign or minus_sign");
    need(!output_dir.empty(), "output.dir must be non-empty");
  }

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

inline std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  if (v.empty()) return out;
  for (const auto& f : split_fields(v)) out.push_back(parse_double(trim(f)));
  return out;
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

inline long parse_integer(const std::string& key, const std::string& v) {
  const double d = parse_double(v);
  if (d != std::floor(d) || std::abs(d) > 1e15) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return static_cast<long>(d);
}

}  // namespace detail

/// Parses and validates a configuration; throws ConfigError with the line number.
inline RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::vector<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string val = detail::trim(body.substr(eq + 1));
    if (std::find(RunConfig::keys().begin(), RunConfig::keys().end(), key) == RunConfig::keys().end())
      throw ConfigError(where + "unknown key '" + key + "'");
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) throw ConfigError(where + "repeated key '" + key + "'");
    seen.push_back(key);
    try {
      if (key == "experiment") c.experiment = val;
      else if (key == "lambda") c.lambda = parse_double(val);
      else if (key == "grid.h") c.grid_h = parse_double(val);
      else if (key == "grid.L") c.grid_L = parse_double(val);
      else if (key == "stationary.eps_list") c.eps_list = detail::parse_list(val);
      else if (key == "stationary.n_rule") c.n_rule = val;
      else if (key == "stationary.damping") c.damping = parse_double(val);
      else if (key == "stationary.tol_fp") c.tol_fp = parse_double(val);
      else if (key == "stationary.max_iter") c.max_iter = detail::parse_integer(key, val);
      else if (key == "stationary.linear_solver_tol") c.linear_solver_tol = parse_double(val);
      else if (key == "stationary.warm_start") c.warm_start = detail::parse_bool(key, val);
      else if (key == "evolution.t_end") c.t_end = parse_double(val);
      else if (key == "evolution.checkpoints") c.checkpoints = detail::parse_list(val);
      else if (key == "evolution.checkpoint_step") c.checkpoint_step = parse_double(val);
      else if (key == "evolution.cfl_safety") c.cfl_safety = parse_double(val);
      else if (key == "evolution.epsilon") c.evolution_epsilon = parse_double(val);
      else if (key == "evolution.fractal_enabled") c.fractal_enabled = detail::parse_bool(key, val);
      else if (key == "evolution.initial_data") c.initial_data = val;
      else if (key == "demo.stationary_input") c.stationary_input = val;
      else if (key == "demo.inline_solve") c.inline_solve = detail::parse_bool(key, val);
      else if (key == "output.dir") c.output_dir = val;
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

inline RunConfig parse_config(const std::string& text_or_path, bool is_path) {
  if (!is_path) {
    std::istringstream is(text_or_path);
    return parse_config(is);
  }
  std::ifstream is(text_or_path);
  if (!is) throw ConfigError("cannot open config: " + text_or_path);
  return parse_config(is);
}

inline std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  auto b = [](bool x) { return x ? "true" : "false"; };
  os << "experiment = " << c.experiment << '\n'
     << "lambda = " << format_double(c.lambda) << '\n'
     << "grid.h = " << format_double(c.grid_h) << '\n'
     << "grid.L = " << format_double(c.grid_L) << '\n'
     << "stationary.eps_list = " << detail::format_list(c.eps_list) << '\n'
     << "stationary.n_rule = " << c.n_rule << '\n'
     << "stationary.damping = " << format_double(c.damping) << '\n'
     << "stationary.tol_fp = " << format_double(c.tol_fp) << '\n'
     << "stationary.max_iter = " << c.max_iter << '\n'
     << "stationary.linear_solver_tol = " << format_double(c.linear_solver_tol) << '\n'
     << "stationary.warm_start = " << b(c.warm_start) << '\n'
     << "evolution.t_end = " << format_double(c.t_end) << '\n'
     << "evolution.checkpoints = " << detail::format_list(c.checkpoints) << '\n'
     << "evolution.checkpoint_step = " << format_double(c.checkpoint_step) << '\n'
     << "evolution.cfl_safety = " << format_double(c.cfl_safety) << '\n'
     << "evolution.epsilon = " << format_double(c.evolution_epsilon) << '\n'
     << "evolution.fractal_enabled = " << b(c.fractal_enabled) << '\n'
     << "evolution.initial_data = " << c.initial_data << '\n'
     << "demo.stationary_input = " << c.stationary_input << '\n'
     << "demo.inline_solve = " << b(c.inline_solve) << '\n'
     << "output.dir = " << c.output_dir << '\n';
  return os.str();
}

}  // namespace fracburgers
