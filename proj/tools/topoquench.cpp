#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topoquench/config.hpp"
#include "topoquench/errors.hpp"
#include "topoquench/runner.hpp"

namespace {

int do_run(const std::string& config_path, const std::string& force_scenario) {
  topoquench::RunConfig cfg;
  try {
    cfg = topoquench::parse_config_file(config_path);
    if (!force_scenario.empty() && cfg.scenario != force_scenario) {
      std::fprintf(stderr, "error: config scenario is '%s', expected '%s'\n",
                   cfg.scenario.c_str(), force_scenario.c_str());
      return topoquench::kError;
    }
  } catch (const topoquench::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return topoquench::kError;
  }

  const topoquench::RunResult result = topoquench::run(cfg);
  if (result.exit_code == topoquench::kOk) {
    std::printf("%s: ok (%.2f s), outputs in %s\n", cfg.scenario.c_str(),
                result.wall_seconds, cfg.output_dir.c_str());
  } else {
    std::fprintf(stderr, "%s: failed (exit %d): %s\n", cfg.scenario.c_str(),
                 result.exit_code, result.error.c_str());
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quench dynamics of lattice band models with time-resolved "
               "topological diagnostics"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Execute one scenario");
  run_cmd->add_option("config", config_path, "Path to a run config")
      ->required();

  std::string sweep_config, axis;
  std::vector<double> values;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Repeat a scenario along a refinement axis");
  sweep_cmd->add_option("config", sweep_config, "Path to a run config")
      ->required();
  sweep_cmd->add_option("--axis", axis, "grid or dt")->required();
  sweep_cmd->add_option("--values", values, "Increasing axis values")
      ->required()
      ->delimiter(',');

  std::string verify_config;
  auto* verify_cmd =
      app.add_subcommand("verify", "Run the symmetry verification suite");
  verify_cmd->add_option("config", verify_config, "Path to a run config")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) return do_run(config_path, "");
  if (verify_cmd->parsed()) return do_run(verify_config, "verify");

  try {
    const topoquench::RunConfig cfg =
        topoquench::parse_config_file(sweep_config);
    const auto entries = topoquench::sweep(cfg, axis, values);
    for (const auto& e : entries) {
      if (e.result.exit_code == topoquench::kOk)
        std::printf("%s=%g: ok (%.2f s)\n", axis.c_str(), e.value,
                    e.result.wall_seconds);
      else
        std::printf("%s=%g: failed (exit %d): %s\n", axis.c_str(), e.value,
                    e.result.exit_code, e.result.error.c_str());
    }
    return topoquench::kOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sweep error: %s\n", e.what());
    return topoquench::kError;
  }
}
