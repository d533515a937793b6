#include "topoquench/evolve.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "topoquench/errors.hpp"

namespace topoquench {

namespace {

const Complex kI{0.0, 1.0};

template <typename Fixed>
Matrix expm_fixed(const Matrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Fixed> solver;
  if constexpr (Fixed::RowsAtCompileTime == 2 ||
                Fixed::RowsAtCompileTime == 3)
    solver.computeDirect(Fixed(h));
  else
    solver.compute(Fixed(h));
  Fixed phases = Fixed::Zero();
  for (int n = 0; n < Fixed::RowsAtCompileTime; ++n)
    phases(n, n) = std::exp(-kI * solver.eigenvalues()(n) * dt);
  return Fixed(solver.eigenvectors() * phases *
               solver.eigenvectors().adjoint());
}

int sample_step_index(double ts, const TimeGrid& grid) {
  const double pos = (ts - grid.t0) / grid.dt();
  const long idx = std::lround(pos);
  if (idx < 0 || idx > grid.n_steps)
    throw InvalidGridError("sample time outside the evolution window");
  return int(idx);
}

}  // namespace

Matrix expm_step(const Matrix& h, double dt) {
  if (!h.allFinite() || !std::isfinite(dt))
    throw NumericError("non-finite input to expm_step");
  const int n = int(h.rows());
  if (n == 2) return expm_fixed<Eigen::Matrix2cd>(h, dt);
  if (n == 3) return expm_fixed<Eigen::Matrix3cd>(h, dt);
  if (n == 4) return expm_fixed<Eigen::Matrix4cd>(h, dt);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigendecomposition failed in expm_step");
  Vector phases(n);
  for (int m = 0; m < n; ++m)
    phases(m) = std::exp(-kI * solver.eigenvalues()(m) * dt);
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

EvolveResult evolve_point(const BlochModel& model, Momentum k,
                          const Matrix& psi0, const TimeGrid& grid) {
  if (psi0.rows() != model.dim)
    throw InvalidCompositionError("state dimension does not match model");
  const double dt = grid.dt();
  Matrix u = Matrix::Identity(model.dim, model.dim);
  for (long i = 1; i <= grid.n_steps; ++i) {
    const double t_mid = grid.t0 + (double(i) - 0.5) * dt;
    u = expm_step(model.evaluate(k, t_mid), dt) * u;
  }
  return {u * psi0, Propagator{u}};
}

FieldTrajectory evolve_field(const BlochModel& model, const StateField& field0,
                             const TimeGrid& grid,
                             const std::vector<double>& sample_times) {
  std::vector<int> sample_steps;
  sample_steps.reserve(sample_times.size());
  for (std::size_t s = 0; s < sample_times.size(); ++s) {
    if (s > 0 && sample_times[s] < sample_times[s - 1])
      throw InvalidGridError("sample times must be monotone");
    sample_steps.push_back(sample_step_index(sample_times[s], grid));
  }

  const int n_points = field0.grid.size();
  const int n_samples = int(sample_times.size());
  FieldTrajectory out;
  out.fields.resize(n_samples);
  out.unitaries.assign(n_samples, std::vector<Matrix>(n_points));
  for (int s = 0; s < n_samples; ++s) {
    out.fields[s].grid = field0.grid;
    out.fields[s].time = grid.t0 + sample_steps[s] * grid.dt();
    out.fields[s].states.resize(n_points);
  }

  const double dt = grid.dt();
  for (int p = 0; p < n_points; ++p) {
    const Momentum k = field0.grid.point(p);
    Matrix u = Matrix::Identity(model.dim, model.dim);
    int next = 0;
    while (next < n_samples && sample_steps[next] == 0) {
      out.fields[next].states[p] = field0.states[p];
      out.unitaries[next][p] = u;
      ++next;
    }
    for (long i = 1; i <= grid.n_steps && next < n_samples; ++i) {
      const double t_mid = grid.t0 + (double(i) - 0.5) * dt;
      u = expm_step(model.evaluate(k, t_mid), dt) * u;
      while (next < n_samples && sample_steps[next] == i) {
        out.fields[next].states[p] = u * field0.states[p];
        out.unitaries[next][p] = u;
        ++next;
      }
    }
  }
  return out;
}

StateField ground_state_field(const BlochModel& model, const ParamGrid& grid,
                              double t, int n_occupied) {
  StateField field;
  field.grid = grid;
  field.time = t;
  field.states.resize(grid.size());
  for (int p = 0; p < grid.size(); ++p) {
    const Momentum k = grid.point(p);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(model.evaluate(k, t));
    if (solver.info() != Eigen::Success)
      throw NumericError("eigendecomposition failed in ground_state_field");
    const auto& ev = solver.eigenvalues();
    if (n_occupied < model.dim &&
        ev(n_occupied) - ev(n_occupied - 1) < 1e-8)
      throw DegenerateSpectrumError(
          "spectral gap closes at k = (" + std::to_string(k.x) + ", " +
              std::to_string(k.y) + ")",
          k);
    Matrix occ = solver.eigenvectors().leftCols(n_occupied);
    // Deterministic phase: largest-magnitude component real positive.
    for (int c = 0; c < n_occupied; ++c) {
      int imax = 0;
      occ.col(c).cwiseAbs().maxCoeff(&imax);
      const Complex z = occ(imax, c);
      occ.col(c) *= std::conj(z) / std::abs(z);
    }
    field.states[p] = occ;
  }
  return field;
}

}  // namespace topoquench
