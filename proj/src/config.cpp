#include "topoquench/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "topoquench/errors.hpp"

namespace topoquench {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& value, const std::string& key,
                    int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    if (!std::isfinite(x))
      throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                        "' must be finite");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) +
                      ": invalid numeric value for key '" + key + "'");
  }
}

int parse_int(const std::string& value, const std::string& key, int line) {
  const double x = parse_number(value, key, line);
  const int n = int(std::lround(x));
  if (std::abs(x - n) > 0.0)
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' must be an integer");
  return n;
}

std::vector<double> parse_list(const std::string& value,
                               const std::string& key, int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_number(trim(item), key, line));
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  bool t0_given = false, t1_given = false;

  std::stringstream lines(text);
  std::string raw;
  int line = 0;
  while (std::getline(lines, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) +
                        ": expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line) +
                        ": expected 'key = value'");
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(line) + ": duplicate key '" +
                        key + "'");

    if (key == "scenario") {
      static const std::set<std::string> known = {
          "lz", "chern-quench", "bhz-quench", "z2-quench", "verify"};
      if (!known.count(value))
        throw ConfigError("line " + std::to_string(line) +
                          ": unknown scenario '" + value + "'");
      cfg.scenario = value;
    } else if (key == "model.v") {
      cfg.v = parse_number(value, key, line);
    } else if (key == "model.g") {
      cfg.g = parse_number(value, key, line);
    } else if (key == "model.m_initial") {
      cfg.m_initial = parse_number(value, key, line);
    } else if (key == "model.m_final") {
      cfg.m_final = parse_number(value, key, line);
    } else if (key == "quench.kind") {
      if (value != "sudden" && value != "linear_ramp" && value != "smooth_tanh")
        throw ConfigError("line " + std::to_string(line) +
                          ": unknown quench.kind '" + value + "'");
      cfg.quench_kind = value;
    } else if (key == "quench.t_start") {
      cfg.quench_t_start = parse_number(value, key, line);
    } else if (key == "quench.t_end") {
      cfg.quench_t_end = parse_number(value, key, line);
    } else if (key == "quench.width") {
      cfg.quench_width = parse_number(value, key, line);
    } else if (key == "grid.nl") {
      cfg.nl = parse_int(value, key, line);
    } else if (key == "grid.nx") {
      cfg.nx = parse_int(value, key, line);
    } else if (key == "grid.ny") {
      cfg.ny = parse_int(value, key, line);
    } else if (key == "time.t0") {
      cfg.t0 = parse_number(value, key, line);
      t0_given = true;
    } else if (key == "time.t1") {
      cfg.t1 = parse_number(value, key, line);
      t1_given = true;
    } else if (key == "time.dt") {
      cfg.dt = parse_number(value, key, line);
    } else if (key == "time.samples") {
      cfg.samples = parse_list(value, key, line);
    } else if (key == "output.dir") {
      cfg.output_dir = value;
    } else if (key.rfind("tol.", 0) == 0) {
      cfg.tol[key.substr(4)] = parse_number(value, key, line);
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" +
                        key + "'");
    }
  }

  if (cfg.scenario.empty()) throw ConfigError("missing required key 'scenario'");
  if (cfg.scenario == "lz" && !(t0_given && t1_given)) {
    // Default LZ window, wide enough for the adiabatic initial state.
    if (!t0_given) cfg.t0 = -200.0;
    if (!t1_given) cfg.t1 = 200.0;
  }
  cfg.window_given = t0_given && t1_given;

  if (cfg.nl < 8) throw ConfigError("range violation: grid.nl must be >= 8");
  if (cfg.nx < 8) throw ConfigError("range violation: grid.nx must be >= 8");
  if (cfg.ny < 8) throw ConfigError("range violation: grid.ny must be >= 8");
  if (!(cfg.dt > 0.0)) throw ConfigError("range violation: time.dt must be > 0");
  if (!(cfg.t1 > cfg.t0))
    throw ConfigError("range violation: time.t1 must exceed time.t0");
  for (double s : cfg.samples)
    if (s < cfg.t0 || s > cfg.t1)
      throw ConfigError(
          "range violation: time.samples must lie inside [time.t0, time.t1]");

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace topoquench
