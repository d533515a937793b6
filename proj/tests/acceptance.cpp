// Acceptance gate: one pass/fail line per criterion, exit 0 only if all
// criteria hold. Tolerances are pinned here on purpose.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "topoquench/evolve.hpp"
#include "topoquench/geometry.hpp"
#include "topoquench/invariants.hpp"
#include "topoquench/models.hpp"
#include "topoquench/runner.hpp"
#include "topoquench/symmetry.hpp"

using namespace topoquench;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const char* label, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, label,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() /
                     ("topoquench_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

// ---------------------------------------------------------------------------

void criterion_1_lz_asymptote() {
  // gamma at t_final, extracted in the instantaneous adiabatic basis, must
  // match 2 pi (1 - exp(-pi g^2 / v)) within 1e-3 * 2 pi for g = 0.5 and 1.
  bool pass = true;
  std::string detail;
  for (double g : {0.5, 1.0}) {
    Timer timer;
    const auto series = lz_run(1.0, g, -200.0, 200.0, 1e-2);
    const double gamma = lz_gamma_infinity(series.back(), 1.0, g);
    const double exact = kTwoPi * (1.0 - std::exp(-kPi * g * g));
    const double err = std::abs(gamma - exact);
    pass = pass && err < 1e-3 * kTwoPi && timer.seconds() < 5.0;
    detail += "g=" + fmt(g) + " err=" + fmt(err) + " (" +
              fmt(timer.seconds()) + "s) ";
  }
  report(1, "Landau-Zener asymptote", pass, detail + "tol=" + fmt(1e-3 * kTwoPi));
}

void criterion_2_adiabatic_limit() {
  Timer timer;
  const auto series = lz_run(0.01, 1.0, -2000.0, 2000.0, 1e-2);
  const double gamma = lz_gamma_infinity(series.back(), 0.01, 1.0);
  const double rel = std::abs(gamma - kTwoPi) / kTwoPi;
  const bool pass = rel < 0.01 && timer.seconds() < 30.0;
  report(2, "adiabatic limit gamma -> 2 pi", pass,
         "rel_err=" + fmt(rel) + " (" + fmt(timer.seconds()) + "s)");
}

void criterion_3_chern_constancy() {
  Timer timer;
  bool pass = true;
  std::string detail;
  for (bool reverse : {false, true}) {
    const double m0 = reverse ? 3.0 : -1.0;
    const double m1 = reverse ? -1.0 : 3.0;
    QuenchProtocol p{QuenchProtocol::Kind::sudden, 0.0, 0.0, 0.0};
    const BlochModel q =
        build_quench(build_two_band_chern(m0), build_two_band_chern(m1), p);
    const StateField f0 = ground_state_field(q, {2, 40, 40}, 0.0, 1);
    std::vector<double> samples;
    for (int s = 0; s <= 10; ++s) samples.push_back(0.5 * s);
    const auto series = chern_series(q, f0, {0.0, 5.0, 500}, samples);
    const int c0 = chern_number(f0);
    bool constant = series.constant(&InvariantSample::c) &&
                    *series.samples.front().c == c0;
    pass = pass && constant;
    detail += std::string(reverse ? "3->-1" : "-1->3") + ":C=" +
              std::to_string(c0) + (constant ? " const " : " JUMPED ");
  }
  pass = pass && timer.seconds() < 10.0;
  report(3, "Chern constancy on 40x40", pass,
         detail + "(" + fmt(timer.seconds()) + "s)");
}

void criterion_4_grid_refinement() {
  Timer timer;
  const fs::path dir = scratch_dir() / "grid_sweep";
  RunConfig cfg;
  cfg.scenario = "chern-quench";
  cfg.t0 = 0.0;
  cfg.t1 = 20.0;
  cfg.dt = 1e-2;
  cfg.output_dir = dir.string();
  const auto entries = sweep(cfg, "grid", {12, 24, 48, 96});

  const bool coarse_fails = entries[0].result.exit_code != kOk;
  int smallest_ok = -1;
  for (const auto& e : entries)
    if (smallest_ok < 0 && e.result.exit_code == kOk &&
        e.result.summary["c_series_constant"].get<bool>())
      smallest_ok = int(std::lround(e.value));
  const bool pass =
      coarse_fails && smallest_ok > 12 && smallest_ok <= 96 &&
      timer.seconds() < 60.0;
  report(4, "coarse-grid failure and sweep restoration", pass,
         "12x12 exit=" + std::to_string(entries[0].result.exit_code) +
             " N*=" + std::to_string(smallest_ok) + " (" +
             fmt(timer.seconds()) + "s)");
}

void criterion_5_z2_constancy() {
  Timer timer;
  const BlochModel bhz = build_bhz(-1.0);
  const BlochModel q =
      build_trs_odd_quench(bhz, default_quench_block(),
                           [](double t) { return t > 0.0 ? 1.0 : 0.0; });
  const StateField f0 = ground_state_field(bhz, {2, 40, 40}, 0.0, 2);
  std::vector<double> samples;
  for (int s = 0; s <= 10; ++s) samples.push_back(0.5 * s);
  const auto series = z2_series(q, f0, {0.0, 5.0, 500}, samples, bhz_trs());

  bool pass = series.constant(&InvariantSample::c2) &&
              *series.samples.front().c2 == 1;
  bool routes = true, cancel = true;
  for (const auto& s : series.samples) {
    routes = routes && s.ok && s.c2 && s.c2_spin && *s.c2 == *s.c2_spin;
    cancel = cancel && s.c_up && s.c_down && *s.c_up + *s.c_down == 0;
  }
  pass = pass && routes && cancel && timer.seconds() < 30.0;
  report(5, "Z2 constancy, both routes, 40x40", pass,
         std::string("c2=1 ") + (routes ? "routes-agree " : "routes-DIFFER ") +
             (cancel ? "C_up+C_down=0 " : "pairing-BROKEN ") + "(" +
             fmt(timer.seconds()) + "s)");
}

void criterion_6_hellmann_feynman() {
  Timer timer;
  auto residual = [](int nl, double dt) {
    const BlochModel lz = build_lz_parameterized(1.0, 1.0);
    StateField f0;
    f0.grid = {1, nl, 1};
    Matrix psi(2, 1);
    psi << 1.0, 0.0;
    f0.states.assign(nl, psi);
    const TimeGrid window{-5.0, 0.0, std::lround(5.0 / dt)};
    const auto traj =
        evolve_field(lz, f0, window, {-2.0 * dt, -dt, 0.0});
    return hellmann_feynman_residual(lz, traj.fields, 0);
  };
  const double coarse = residual(256, 1e-3);
  const double fine = residual(512, 5e-4);
  const double ratio = coarse / fine;
  const bool pass = coarse < 1e-3 && ratio > 2.5 && ratio < 6.0 &&
                    timer.seconds() < 20.0;
  report(6, "Hellmann-Feynman identity", pass,
         "residual=" + fmt(coarse) + " refine_ratio=" + fmt(ratio) + " (" +
             fmt(timer.seconds()) + "s)");
}

void criterion_7_auxiliary_hamiltonian() {
  // Re-runs the two quenches above through the batch runner, which reports
  // the worst auxiliary spectrum / eigenvector residuals over all sampled
  // (k, t).
  Timer timer;
  bool pass = true;
  std::string detail;
  const fs::path base = scratch_dir();

  RunConfig chern;
  chern.scenario = "chern-quench";
  chern.nx = chern.ny = 40;
  chern.t0 = 0.0;
  chern.t1 = 5.0;
  chern.dt = 1e-2;
  chern.output_dir = (base / "aux_chern").string();
  RunConfig z2 = chern;
  z2.scenario = "z2-quench";
  z2.output_dir = (base / "aux_z2").string();

  for (const RunConfig& cfg : {chern, z2}) {
    const RunResult res = run(cfg);
    if (res.exit_code != kOk) {
      pass = false;
      detail += cfg.scenario + " exit=" + std::to_string(res.exit_code) + " ";
      continue;
    }
    const double spec = res.summary["aux_spectrum_residual"].get<double>();
    const double vec = res.summary["aux_eigvec_residual"].get<double>();
    pass = pass && spec < 1e-9 && vec < 1e-8;
    detail += cfg.scenario + ": spec=" + fmt(spec) + " vec=" + fmt(vec) + " ";
  }
  report(7, "auxiliary-Hamiltonian equivalence", pass,
         detail + "(" + fmt(timer.seconds()) + "s)");
}

void criterion_8_property_suites() {
  Timer timer;
  const Complex i_unit{0.0, 1.0};
  bool pass = true;
  std::string detail;

  {  // Unitarity drift over ten thousand steps.
    const BlochModel lz = build_lz_parameterized(1.0, 1.0);
    Matrix psi(2, 1);
    psi << 1.0, 0.0;
    const EvolveResult res =
        evolve_point(lz, {0.4, 0.0}, psi, {-50.0, 50.0, 10000});
    const double drift = unitarity_residual(res.propagator.matrix);
    pass = pass && drift < 1e-10;
    detail += "unitarity=" + fmt(drift) + " ";
  }
  {  // Gauge invariance of gamma, eps and C under random rephasings.
    // Rephasings bounded so no per-link loop increment wraps past +-pi.
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const BlochModel lz = build_lz_parameterized(1.0, 1.0);
    StateField loop;
    loop.grid = {1, 128, 1};
    loop.states.resize(128);
    for (int p = 0; p < 128; ++p) {
      Matrix psi(2, 1);
      psi(0, 0) = std::sqrt(0.75);
      psi(1, 0) = std::sqrt(0.25) *
                  std::exp(-i_unit * loop.grid.point(p).x);
      loop.states[p] = psi;
    }
    const double gamma0 = geometric_phase_loop(loop);
    const auto eps0 = hamiltonian_energy(lz, loop, 0, 0.0);
    StateField chern_field =
        ground_state_field(build_two_band_chern(-1.0), {2, 24, 24}, 0.0, 1);
    const int c0 = chern_number(chern_field);
    for (auto& psi : loop.states) psi *= std::exp(i_unit * uni(rng));
    for (auto& psi : chern_field.states) psi *= std::exp(i_unit * uni(rng));
    const auto eps1 = hamiltonian_energy(lz, loop, 0, 0.0);
    double worst_eps = 0.0;
    for (std::size_t p = 0; p < eps0.size(); ++p)
      worst_eps = std::max(worst_eps, std::abs(eps0[p] - eps1[p]));
    const bool gauge_ok =
        std::abs(geometric_phase_loop(loop) - gamma0) < 1e-12 &&
        worst_eps < 1e-12 && chern_number(chern_field) == c0;
    pass = pass && gauge_ok;
    detail += std::string("gauge=") + (gauge_ok ? "ok " : "BROKEN ");
  }
  {  // Band-sum rule: the complete basis carries zero total Chern number.
    const StateField all =
        ground_state_field(build_two_band_chern(-1.0), {2, 24, 24}, 0.0, 2);
    const bool sum_ok = chern_number(all) == 0;
    pass = pass && sum_ok;
    detail += std::string("band_sum=") + (sum_ok ? "0 " : "NONZERO ");
  }
  {  // Lipschitz bound on the driven loop phase.
    const BlochModel lz = build_lz_parameterized(1.0, 1.0);
    Matrix psi(2, 1);
    psi << 1.0, 0.0;
    StateField f0;
    f0.grid = {1, 128, 1};
    f0.states.assign(128, psi);
    std::vector<double> samples;
    for (int s = 0; s <= 20; ++s) samples.push_back(-0.5 + 0.05 * s);
    const auto traj = evolve_field(lz, f0, {-30.0, 0.5, 30500}, samples);
    const LipschitzReport rep = phase_lipschitz_bound(lz, traj.fields);
    const bool lipschitz_ok =
        rep.measured_max_rate <= rep.bound * (1.0 + 1e-6) + 1e-8 &&
        rep.bound <= kTwoPi + 1e-9;
    pass = pass && lipschitz_ok;
    detail += std::string("lipschitz=") + (lipschitz_ok ? "ok " : "VIOLATED ");
  }
  {  // Determinism of the batch runner (serial evaluation; repeated runs
     // must be byte-identical).
    const fs::path base = scratch_dir();
    auto emit = [&](const std::string& tag) {
      RunConfig cfg;
      cfg.scenario = "lz";
      cfg.v = 1.0;
      cfg.g = 0.5;
      cfg.t0 = -30.0;
      cfg.t1 = 30.0;
      cfg.dt = 1e-2;
      cfg.output_dir = (base / tag).string();
      run(cfg);
      std::ifstream in(base / tag / "series.csv", std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const bool deterministic = emit("det_a") == emit("det_b");
    pass = pass && deterministic;
    detail += std::string("determinism=") + (deterministic ? "ok " : "BROKEN ");
  }
  report(8, "property suites", pass, detail + "(" + fmt(timer.seconds()) + "s)");
}

}  // namespace

int main() {
  criterion_1_lz_asymptote();
  criterion_2_adiabatic_limit();
  criterion_3_chern_constancy();
  criterion_4_grid_refinement();
  criterion_5_z2_constancy();
  criterion_6_hellmann_feynman();
  criterion_7_auxiliary_hamiltonian();
  criterion_8_property_suites();

  std::error_code ec;
  fs::remove_all(scratch_dir(), ec);
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
