#pragma once

#include <map>
#include <string>
#include <vector>

namespace topoquench {

/// Validated run configuration, parsed from the flat key-value format
/// (one `key = value` per line, `#` comments, unknown keys rejected).
struct RunConfig {
  std::string scenario;  // lz | chern-quench | bhz-quench | z2-quench | verify

  // model.*
  double v = 1.0;
  double g = 1.0;
  double m_initial = -1.0;
  double m_final = 3.0;

  // quench.*
  std::string quench_kind = "sudden";
  double quench_t_start = 0.0;
  double quench_t_end = 0.0;
  double quench_width = 0.1;

  // grid.*
  int nl = 256;
  int nx = 40;
  int ny = 40;

  // time.*
  double t0 = 0.0;
  double t1 = 5.0;
  double dt = 1e-2;
  std::vector<double> samples;  // empty: scenario default
  bool window_given = false;

  // output.*
  std::string output_dir = "out";

  // tol.*
  std::map<std::string, double> tol;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace topoquench
