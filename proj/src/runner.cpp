#include "topoquench/runner.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "topoquench/errors.hpp"
#include "topoquench/evolve.hpp"
#include "topoquench/geometry.hpp"
#include "topoquench/invariants.hpp"
#include "topoquench/models.hpp"
#include "topoquench/symmetry.hpp"

namespace topoquench {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct CsvWriter {
  std::string body;
  void header(const std::string& h) { body = h + "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      body += cells[i];
      body += (i + 1 < cells.size()) ? "," : "\n";
    }
  }
};

QuenchProtocol protocol_from(const RunConfig& cfg) {
  QuenchProtocol p;
  if (cfg.quench_kind == "sudden")
    p.kind = QuenchProtocol::Kind::sudden;
  else if (cfg.quench_kind == "linear_ramp")
    p.kind = QuenchProtocol::Kind::linear_ramp;
  else
    p.kind = QuenchProtocol::Kind::smooth_tanh;
  p.t_start = cfg.quench_t_start;
  p.t_end = cfg.quench_t_end;
  p.width = cfg.quench_width;
  return p;
}

std::vector<double> sample_times_from(const RunConfig& cfg, int default_count) {
  if (!cfg.samples.empty()) return cfg.samples;
  std::vector<double> out(default_count);
  for (int i = 0; i < default_count; ++i)
    out[i] = cfg.t0 + (cfg.t1 - cfg.t0) * double(i) / double(default_count - 1);
  return out;
}

TimeGrid window_from(const RunConfig& cfg) {
  TimeGrid grid;
  grid.t0 = cfg.t0;
  grid.t1 = cfg.t1;
  grid.n_steps = std::max(1l, std::lround((cfg.t1 - cfg.t0) / cfg.dt));
  return grid;
}

Json config_echo(const RunConfig& cfg) {
  Json j;
  j["scenario"] = cfg.scenario;
  j["model"] = {{"v", cfg.v},
                {"g", cfg.g},
                {"m_initial", cfg.m_initial},
                {"m_final", cfg.m_final}};
  j["quench"] = {{"kind", cfg.quench_kind},
                 {"t_start", cfg.quench_t_start},
                 {"t_end", cfg.quench_t_end},
                 {"width", cfg.quench_width}};
  j["grid"] = {{"nl", cfg.nl}, {"nx", cfg.nx}, {"ny", cfg.ny}};
  j["time"] = {{"t0", cfg.t0}, {"t1", cfg.t1}, {"dt", cfg.dt}};
  j["output"] = {{"dir", cfg.output_dir}};
  return j;
}

/// Auxiliary-Hamiltonian diagnostics across a trajectory: worst sorted
/// eigenvalue mismatch of U H0 U^dag against H0, and worst eigenvector
/// residual of the evolved occupied states.
struct AuxReport {
  double spectrum_residual = 0.0;
  double eigvec_residual = 0.0;
};

AuxReport aux_hamiltonian_report(const BlochModel& model,
                                 const StateField& field0,
                                 const FieldTrajectory& traj) {
  AuxReport report;
  const ParamGrid& grid = field0.grid;
  for (int p = 0; p < grid.size(); ++p) {
    const Momentum k = grid.point(p);
    const Matrix h0 = model.evaluate(k, field0.time);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(h0);
    const Matrix& psi0 = field0.states[p];
    const Eigen::VectorXd energies =
        (psi0.adjoint() * h0 * psi0).diagonal().real();
    for (std::size_t s = 0; s < traj.fields.size(); ++s) {
      const Matrix ha = auxiliary_hamiltonian({traj.unitaries[s][p]}, h0);
      Eigen::SelfAdjointEigenSolver<Matrix> aux(ha);
      report.spectrum_residual =
          std::max(report.spectrum_residual,
                   (aux.eigenvalues() - ref.eigenvalues()).cwiseAbs().maxCoeff());
      const Matrix& psi = traj.fields[s].states[p];
      for (int n = 0; n < psi.cols(); ++n) {
        const double res =
            (ha * psi.col(n) - energies(n) * psi.col(n)).cwiseAbs().maxCoeff();
        report.eigvec_residual = std::max(report.eigvec_residual, res);
      }
    }
  }
  return report;
}

struct Outputs {
  CsvWriter csv;
  Json summary;
};

Outputs run_lz(const RunConfig& cfg) {
  const auto series = lz_run(cfg.v, cfg.g, cfg.t0, cfg.t1, cfg.dt);

  Outputs out;
  out.csv.header("t,re_a,im_a,re_b,im_b,gamma,gamma_rate");
  for (const auto& s : series)
    out.csv.row({fmt17(s.t), fmt17(s.a.real()), fmt17(s.a.imag()),
                 fmt17(s.b.real()), fmt17(s.b.imag()), fmt17(s.gamma),
                 fmt17(s.gamma_rate)});

  // Cross-check: finite-difference dgamma/dt against the analytic rate.
  double rate_mismatch = 0.0;
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    const double fd =
        (series[i + 1].gamma - series[i - 1].gamma) / (2.0 * cfg.dt);
    rate_mismatch = std::max(rate_mismatch, std::abs(fd - series[i].gamma_rate));
  }

  const double gamma_final = series.back().gamma;
  const double gamma_inf = lz_gamma_infinity(series.back(), cfg.v, cfg.g);
  const double closed_form =
      kTwoPi * (1.0 - std::exp(-kPi * cfg.g * cfg.g / cfg.v));
  out.summary["gamma_final"] = gamma_final;
  out.summary["gamma_inf"] = gamma_inf;
  out.summary["gamma_inf_closed_form"] = closed_form;
  out.summary["gamma_inf_abs_error"] = std::abs(gamma_inf - closed_form);
  out.summary["gamma_rate_fd_mismatch"] = rate_mismatch;
  return out;
}

Outputs run_chern_quench(const RunConfig& cfg) {
  const BlochModel initial = build_two_band_chern(cfg.m_initial);
  const BlochModel final_ = build_two_band_chern(cfg.m_final);
  const BlochModel quench = build_quench(initial, final_, protocol_from(cfg));
  const ParamGrid grid{2, cfg.nx, cfg.ny};
  const TimeGrid window = window_from(cfg);
  const auto samples = sample_times_from(cfg, 11);

  const StateField field0 = ground_state_field(quench, grid, cfg.t0, 1);
  const FieldTrajectory traj = evolve_field(quench, field0, window, samples);

  Outputs out;
  out.csv.header("t,c,min_overlap");
  bool constant = true;
  int c0 = 0;
  double min_overlap = 1.0;
  Momentum worst_k;
  for (std::size_t s = 0; s < traj.fields.size(); ++s) {
    const ChernResult c = lattice_chern(traj.fields[s]);
    if (s == 0) c0 = c.value;
    constant = constant && (c.value == c0);
    if (c.min_overlap < min_overlap) {
      min_overlap = c.min_overlap;
      worst_k = c.worst_k;
    }
    out.csv.row({fmt17(traj.fields[s].time), std::to_string(c.value),
                 fmt17(c.min_overlap)});
  }
  // Unitary evolution keeps the index exactly constant in the continuum, so
  // a jump in the lattice series is a discretization artifact: the grid is
  // too coarse for this window even though every link cleared the floor.
  if (!constant)
    throw InadmissibleGridError(
        "Chern series is not constant in time; a denser momentum grid is "
        "required for this window",
        worst_k, min_overlap);

  const AuxReport aux = aux_hamiltonian_report(quench, field0, traj);
  out.summary["c_initial"] = c0;
  out.summary["c_series_constant"] = constant;
  out.summary["min_overlap"] = min_overlap;
  out.summary["aux_spectrum_residual"] = aux.spectrum_residual;
  out.summary["aux_eigvec_residual"] = aux.eigvec_residual;
  return out;
}

Outputs run_bhz_family(const RunConfig& cfg, bool half_bz_route) {
  const BlochModel bhz = build_bhz(cfg.m_initial);
  const QuenchProtocol protocol = protocol_from(cfg);
  const BlochModel quench = build_trs_odd_quench(
      bhz, default_quench_block(),
      [protocol](double t) { return protocol.mix(t); });
  const TrsOperator trs = bhz_trs();
  const ParamGrid grid{2, cfg.nx, cfg.ny};
  const TimeGrid window = window_from(cfg);
  const auto samples = sample_times_from(cfg, 11);

  const StateField field0 = ground_state_field(bhz, grid, cfg.t0, 2);
  const FieldTrajectory traj = evolve_field(quench, field0, window, samples);

  Outputs out;
  if (half_bz_route)
    out.csv.header("t,c2,c_up,c_down,c2_spin,pairing_residual,min_overlap");
  else
    out.csv.header("t,c_up,c_down,c2,min_overlap");

  bool constant = true, routes_agree = true, pairing_holds = true;
  int c2_first = -1;
  double min_overlap = 1.0, worst_pairing = 0.0;
  for (std::size_t s = 0; s < traj.fields.size(); ++s) {
    const StateField& field = traj.fields[s];
    const auto [up, down] = split_spin_blocks(field);
    const ChernResult cu = lattice_chern(up);
    const ChernResult cd = lattice_chern(down);
    pairing_holds = pairing_holds && (cu.value + cd.value == 0);
    const int c2_spin = spin_chern_z2(cu.value, cd.value);
    min_overlap = std::min({min_overlap, cu.min_overlap, cd.min_overlap});

    int c2 = c2_spin;
    double pairing_residual = 0.0;
    if (half_bz_route) {
      const Z2Result z2 = z2_half_bz_detailed(field, trs);
      c2 = z2.value;
      pairing_residual = z2.pairing_residual;
      worst_pairing = std::max(worst_pairing, pairing_residual);
      min_overlap = std::min(min_overlap, z2.min_overlap);
      routes_agree = routes_agree && (c2 == c2_spin);
      out.csv.row({fmt17(field.time), std::to_string(c2),
                   std::to_string(cu.value), std::to_string(cd.value),
                   std::to_string(c2_spin), fmt17(pairing_residual),
                   fmt17(std::min(cu.min_overlap,
                                  std::min(cd.min_overlap, z2.min_overlap)))});
    } else {
      out.csv.row({fmt17(field.time), std::to_string(cu.value),
                   std::to_string(cd.value), std::to_string(c2_spin),
                   fmt17(std::min(cu.min_overlap, cd.min_overlap))});
    }
    if (s == 0) c2_first = c2;
    constant = constant && (c2 == c2_first);
  }
  if (!constant)
    throw InadmissibleGridError(
        "Z2 series is not constant in time; a denser momentum grid is "
        "required for this window",
        Momentum{}, min_overlap);

  const AuxReport aux = aux_hamiltonian_report(bhz, field0, traj);
  out.summary["c2_initial"] = c2_first;
  out.summary["c2_series_constant"] = constant;
  if (half_bz_route) {
    out.summary["routes_agree"] = routes_agree;
    out.summary["max_pairing_residual"] = worst_pairing;
  }
  out.summary["spin_pairing_holds"] = pairing_holds;
  out.summary["min_overlap"] = min_overlap;
  out.summary["aux_spectrum_residual"] = aux.spectrum_residual;
  out.summary["aux_eigvec_residual"] = aux.eigvec_residual;
  return out;
}

Outputs run_verify(const RunConfig& cfg) {
  const BlochModel bhz = build_bhz(cfg.m_initial);
  const QuenchProtocol protocol = protocol_from(cfg);
  const BlochModel quench = build_trs_odd_quench(
      bhz, default_quench_block(),
      [protocol](double t) { return protocol.mix(t); });
  const TrsOperator trs = bhz_trs();
  const ParamGrid grid{2, cfg.nx, cfg.ny};
  const TimeGrid window = window_from(cfg);

  std::vector<SymmetryReport> reports;
  reports.push_back(check_trs_static(bhz, trs, cfg.t0));
  reports.push_back(check_trs_quench(quench, trs, cfg.t0, cfg.t1));

  const StateField field0 = ground_state_field(bhz, grid, cfg.t0, 2);
  const FieldTrajectory traj =
      evolve_field(quench, field0, window, {cfg.t1});
  reports.push_back(
      check_propagator_trs(grid, traj.unitaries.back(), trs));

  const AuxReport aux = aux_hamiltonian_report(bhz, field0, traj);
  reports.push_back({"aux_spectrum", aux.spectrum_residual, 1e-9,
                     aux.spectrum_residual < 1e-9});
  reports.push_back({"aux_eigenvectors", aux.eigvec_residual, 1e-8,
                     aux.eigvec_residual < 1e-8});

  // Transported TRS validates the auxiliary Hamiltonian.
  SymmetryReport aux_trs_report;
  aux_trs_report.name = "aux_trs";
  aux_trs_report.tolerance = 1e-8;
  for (int p = 0; p < grid.size(); ++p) {
    const int q = grid.negate(p);
    const TrsOperator ta = auxiliary_trs({traj.unitaries.back()[p]},
                                         {traj.unitaries.back()[q]}, trs);
    const Momentum k = grid.point(p);
    const Matrix ha_k = auxiliary_hamiltonian({traj.unitaries.back()[p]},
                                              bhz.evaluate(k, cfg.t0));
    const Matrix ha_negk = auxiliary_hamiltonian(
        {traj.unitaries.back()[q]}, bhz.evaluate(k.negated(), cfg.t0));
    const double res =
        (ta.u * ha_k.conjugate() * ta.u.adjoint() - ha_negk)
            .cwiseAbs()
            .maxCoeff();
    if (res > aux_trs_report.max_residual) {
      aux_trs_report.max_residual = res;
      aux_trs_report.worst_k = k;
    }
  }
  aux_trs_report.pass =
      aux_trs_report.max_residual < aux_trs_report.tolerance;
  reports.push_back(aux_trs_report);

  Outputs out;
  out.csv.header("check,residual,tolerance,pass");
  bool all_pass = true;
  Json residuals;
  for (const auto& r : reports) {
    out.csv.row({r.name, fmt17(r.max_residual), fmt17(r.tolerance),
                 r.pass ? "1" : "0"});
    residuals[r.name] = r.max_residual;
    all_pass = all_pass && r.pass;
  }
  out.summary["all_checks_pass"] = all_pass;
  out.summary["residuals"] = residuals;
  if (!all_pass)
    throw SymmetryViolationError("one or more symmetry checks failed");
  return out;
}

void write_outputs(const RunConfig& cfg, const Outputs& out) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  const fs::path csv_path = dir / "series.csv";
  const fs::path json_path = dir / "summary.json";
  try {
    {
      std::ofstream csv(csv_path, std::ios::binary);
      csv << out.csv.body;
      if (!csv) throw Error("failed writing " + csv_path.string());
    }
    {
      std::ofstream js(json_path, std::ios::binary);
      js << out.summary.dump(2) << "\n";
      if (!js) throw Error("failed writing " + json_path.string());
    }
  } catch (...) {
    std::error_code ec;
    fs::remove(csv_path, ec);
    fs::remove(json_path, ec);
    throw;
  }
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  try {
    Outputs out;
    if (cfg.scenario == "lz")
      out = run_lz(cfg);
    else if (cfg.scenario == "chern-quench")
      out = run_chern_quench(cfg);
    else if (cfg.scenario == "bhz-quench")
      out = run_bhz_family(cfg, false);
    else if (cfg.scenario == "z2-quench")
      out = run_bhz_family(cfg, true);
    else if (cfg.scenario == "verify")
      out = run_verify(cfg);
    else
      throw ConfigError("unknown scenario: " + cfg.scenario);

    Json summary;
    summary["scenario"] = cfg.scenario;
    summary["config"] = config_echo(cfg);
    for (auto& [key, value] : out.summary.items()) summary[key] = value;
    out.summary = summary;
    write_outputs(cfg, out);
    result.summary = std::move(summary);
  } catch (const SymmetryViolationError& e) {
    result.exit_code = kSymmetryViolation;
    result.error = e.what();
  } catch (const InadmissibleGridError& e) {
    result.exit_code = kInadmissibleGrid;
    result.error = std::string(e.what()) + " (worst overlap " +
                   fmt17(e.worst_overlap) + " at k = (" + fmt17(e.worst_k.x) +
                   ", " + fmt17(e.worst_k.y) + "))";
  } catch (const std::exception& e) {
    result.exit_code = kError;
    result.error = e.what();
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

std::vector<SweepEntry> sweep(const RunConfig& cfg, const std::string& axis,
                              const std::vector<double>& values) {
  if (axis != "grid" && axis != "dt")
    throw ConfigError("sweep axis must be 'grid' or 'dt'");
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw ConfigError("sweep values must be strictly increasing");

  std::vector<SweepEntry> entries;
  Json table = Json::array();
  double smallest_constant_grid = -1.0;
  for (double value : values) {
    RunConfig sub = cfg;
    std::string label;
    if (axis == "grid") {
      const int n = int(std::lround(value));
      sub.nx = sub.ny = sub.nl = n;
      label = "grid_" + std::to_string(n);
    } else {
      sub.dt = value;
      label = "dt_" + fmt17(value);
    }
    sub.output_dir = (fs::path(cfg.output_dir) / label).string();
    SweepEntry entry;
    entry.value = value;
    entry.result = run(sub);
    Json row;
    row["value"] = value;
    row["exit_code"] = entry.result.exit_code;
    if (entry.result.exit_code == kOk) {
      row["summary"] = entry.result.summary;
      if (axis == "grid" && smallest_constant_grid < 0) {
        const auto& s = entry.result.summary;
        const bool constant =
            (s.contains("c_series_constant") &&
             s["c_series_constant"].get<bool>()) ||
            (s.contains("c2_series_constant") &&
             s["c2_series_constant"].get<bool>());
        if (constant) smallest_constant_grid = value;
      }
    } else {
      row["error"] = entry.result.error;
    }
    table.push_back(std::move(row));
    entries.push_back(std::move(entry));
  }

  Json out;
  out["scenario"] = cfg.scenario;
  out["axis"] = axis;
  out["runs"] = std::move(table);
  if (axis == "grid")
    out["smallest_constant_grid"] =
        smallest_constant_grid < 0 ? Json() : Json(int(smallest_constant_grid));
  fs::create_directories(cfg.output_dir);
  std::ofstream js(fs::path(cfg.output_dir) / "sweep.json", std::ios::binary);
  js << out.dump(2) << "\n";
  return entries;
}

}  // namespace topoquench
