#include "topoquench/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "topoquench/errors.hpp"

namespace topoquench {

namespace {

const Complex kI{0.0, 1.0};

Complex overlap_det(const Matrix& a, const Matrix& b) {
  return Matrix(a.adjoint() * b).determinant();
}

Complex admissible_overlap(const StateField& field, int p, int q) {
  const Complex ov = overlap_det(field.states[p], field.states[q]);
  if (std::abs(ov) < kAdmissibilityFloor)
    throw InadmissibleGridError(
        "neighbor overlap below admissibility floor; refine the grid",
        field.grid.point(p), std::abs(ov));
  return ov;
}

void require_same_grid(const StateField& a, const StateField& b) {
  if (!(a.grid == b.grid))
    throw InvalidGridError("state fields live on different grids");
}

}  // namespace

std::vector<double> berry_connection(const StateField& field, int dir) {
  const double delta = field.grid.spacing(dir);
  std::vector<double> samples(field.grid.size());
  for (int p = 0; p < field.grid.size(); ++p) {
    // <psi(k)|psi(k+d)> ~ 1 - i A d for A = i<psi|d psi>, hence the sign.
    const int q = field.grid.neighbor(p, dir);
    samples[p] = -std::arg(admissible_overlap(field, p, q)) / delta;
  }
  return samples;
}

std::vector<double> hamiltonian_energy(const BlochModel& model,
                                       const StateField& field, int dir,
                                       double t) {
  std::vector<double> samples(field.grid.size());
  for (int p = 0; p < field.grid.size(); ++p) {
    const Matrix grad = model.gradient(field.grid.point(p), t, dir);
    samples[p] =
        (field.states[p].adjoint() * grad * field.states[p]).real().trace();
  }
  return samples;
}

double hellmann_feynman_residual(const BlochModel& model,
                                 const std::vector<StateField>& trajectory,
                                 int dir) {
  if (trajectory.size() < 3)
    throw InvalidGridError("need at least 3 time snapshots");
  const double dt = trajectory[1].time - trajectory[0].time;
  for (std::size_t s = 1; s < trajectory.size(); ++s) {
    require_same_grid(trajectory[s], trajectory[0]);
    if (std::abs(trajectory[s].time - trajectory[s - 1].time - dt) >
        1e-9 * std::max(1.0, std::abs(dt)))
      throw InvalidGridError("snapshots must be equally spaced in time");
  }

  const ParamGrid& grid = trajectory[0].grid;
  std::vector<std::vector<double>> conn(trajectory.size());
  for (std::size_t s = 0; s < trajectory.size(); ++s)
    conn[s] = berry_connection(trajectory[s], dir);

  double worst = 0.0;
  for (std::size_t s = 1; s + 1 < trajectory.size(); ++s) {
    const auto eps =
        hamiltonian_energy(model, trajectory[s], dir, trajectory[s].time);
    for (int p = 0; p < grid.size(); ++p) {
      const double da_dt = (conn[s + 1][p] - conn[s - 1][p]) / (2.0 * dt);
      // The link sample lives on the midpoint between p and its neighbor;
      // average eps over the link endpoints to match.
      const int q = grid.neighbor(p, dir);
      const double eps_link = 0.5 * (eps[p] + eps[q]);
      worst = std::max(worst, std::abs(da_dt - eps_link));
    }
  }
  return worst;
}

double geometric_phase_loop(const StateField& field) {
  if (field.grid.dims != 1)
    throw InvalidGridError("geometric_phase_loop expects a 1-D loop");
  double total = 0.0;
  for (int p = 0; p < field.grid.size(); ++p) {
    const int q = field.grid.neighbor(p, 0);
    const double incr = -std::arg(admissible_overlap(field, p, q));
    if (std::abs(incr) >= kPi - 1e-9)
      throw InadmissibleGridError(
          "per-link phase increment reaches pi; loop resolution too coarse",
          field.grid.point(p), std::abs(incr));
    total += incr;
  }
  return total;
}

std::vector<LzSample> lz_run(double v, double g, double t0, double t1,
                             double dt) {
  if (!(v > 0.0) || g < 0.0 || !std::isfinite(t0) || !std::isfinite(t1) ||
      !(dt > 0.0))
    throw InvalidParameterError("lz_run parameters out of range");
  if (-t0 < 20.0 * std::max(1.0, g) / v)
    throw InvalidParameterError(
        "window start too late for an adiabatic initial state: need "
        "|t0| >= 20 max(1, g) / v");

  const long n_steps = std::lround((t1 - t0) / dt);
  const Matrix h_x = g * pauli_x();

  // Instantaneous ground state of H(t0) = v t0 sigma_z + g sigma_x; for
  // v t0 << -g this is (1, 0)^T up to an O(g / v t0) admixture, and starting
  // from the exact eigenstate keeps the preparation error far below the
  // scattering tail instead of injecting an O(g / v t0) one directly.
  Matrix h0 = h_x;
  h0(0, 0) += v * t0;
  h0(1, 1) -= v * t0;
  Eigen::SelfAdjointEigenSolver<Matrix> ground(h0);
  Vector psi = ground.eigenvectors().col(0);
  if (std::real(psi(0)) < 0.0) psi = -psi;

  std::vector<LzSample> series;
  series.reserve(std::size_t(n_steps) + 1);
  auto record = [&](double t) {
    const Complex a = psi(0), b = psi(1);
    series.push_back({t, a, b, kTwoPi * std::norm(b),
                      2.0 * kTwoPi * g * std::imag(std::conj(b) * a)});
  };
  record(t0);
  Matrix h(2, 2);
  for (long i = 1; i <= n_steps; ++i) {
    const double t_mid = t0 + (double(i) - 0.5) * dt;
    h = h_x;
    h(0, 0) += v * t_mid;
    h(1, 1) -= v * t_mid;
    psi = expm_step(h, dt) * psi;
    record(t0 + double(i) * dt);
  }
  return series;
}

double lz_gamma_infinity(const LzSample& final_sample, double v, double g) {
  if (!(v > 0.0) || g < 0.0)
    throw InvalidParameterError("lz_gamma_infinity parameters out of range");
  const double t = final_sample.t;
  // Ground state of v t sigma_z + g sigma_x; for t -> +inf it tends to
  // (0, 1)^T, so its population tends to |b|^2 with the oscillatory
  // O(g / v t) mixing removed.
  const double e = std::hypot(v * t, g);
  const double den = std::hypot(g, v * t + e);
  double u0, u1;
  if (den > 1e-300) {
    u0 = -g / den;
    u1 = (v * t + e) / den;
  } else {  // g == 0 and t <= 0: ground state is (1, 0)^T
    u0 = 1.0;
    u1 = 0.0;
  }
  const Complex amp = u0 * final_sample.a + u1 * final_sample.b;
  return kTwoPi * std::norm(amp);
}

LipschitzReport phase_lipschitz_bound(
    const BlochModel& model, const std::vector<StateField>& trajectory) {
  if (trajectory.size() < 2)
    throw InvalidGridError("need at least 2 time snapshots");
  const double delta = trajectory[0].grid.spacing(0);

  LipschitzReport report{0.0, 0.0};
  double prev_gamma = geometric_phase_loop(trajectory[0]);
  for (std::size_t s = 0; s < trajectory.size(); ++s) {
    require_same_grid(trajectory[s], trajectory[0]);
    const auto eps =
        hamiltonian_energy(model, trajectory[s], 0, trajectory[s].time);
    double loop_abs = 0.0;
    for (double e : eps) loop_abs += std::abs(e) * delta;
    report.bound = std::max(report.bound, loop_abs);
    if (s > 0) {
      const double gamma = geometric_phase_loop(trajectory[s]);
      const double dt = trajectory[s].time - trajectory[s - 1].time;
      report.measured_max_rate =
          std::max(report.measured_max_rate, std::abs(gamma - prev_gamma) / dt);
      prev_gamma = gamma;
    }
  }
  return report;
}

double connection_decomposition_check(const StateField& field0,
                                      const std::vector<Matrix>& propagators,
                                      const StateField& field_t, int dir) {
  require_same_grid(field0, field_t);
  const ParamGrid& grid = field0.grid;
  if (int(propagators.size()) != grid.size())
    throw InvalidGridError("one propagator per grid point required");

  const double delta = grid.spacing(dir);
  double worst = 0.0;
  for (int p = 0; p < grid.size(); ++p) {
    const int fwd = grid.neighbor(p, dir, +1);
    const int bwd = grid.neighbor(p, dir, -1);
    // Both connections via the symmetric two-sided link, centered at p.
    const double a_t =
        -std::arg(admissible_overlap(field_t, bwd, fwd)) / (2.0 * delta);
    const double a_0 =
        -std::arg(admissible_overlap(field0, bwd, fwd)) / (2.0 * delta);
    const Matrix du = (propagators[fwd] - propagators[bwd]) / (2.0 * delta);
    const Complex term = (field0.states[p].adjoint() *
                          (propagators[p].adjoint() * du) * field0.states[p])
                             .trace();
    worst = std::max(worst, std::abs(a_t - (a_0 + std::real(kI * term))));
  }
  return worst;
}

}  // namespace topoquench
