#pragma once

#include <vector>

#include "topoquench/models.hpp"
#include "topoquench/types.hpp"

namespace topoquench {

/// Uniform time discretization of [t0, t1].
struct TimeGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  long n_steps = 0;

  double dt() const { return (t1 - t0) / double(n_steps); }
};

/// Single short-time factor exp(-i H dt), via the eigendecomposition of H.
Matrix expm_step(const Matrix& h, double dt);

struct EvolveResult {
  Matrix states;  // dim x n_occupied
  Propagator propagator;
};

/// Steps the Schroedinger equation at a fixed grid point by a product of
/// short-time exponentials; H is evaluated at the midpoint of each step.
EvolveResult evolve_point(const BlochModel& model, Momentum k,
                          const Matrix& psi0, const TimeGrid& grid);

struct FieldTrajectory {
  std::vector<StateField> fields;           // one per sample time
  std::vector<std::vector<Matrix>> unitaries;  // per sample, per grid point
};

/// Evolves every grid point of `field0` through [grid.t0, grid.t1],
/// snapshotting states and accumulated propagators at each sample time.
/// Sample times must be monotone and contained in the window; they are
/// snapped to the nearest step boundary.
FieldTrajectory evolve_field(const BlochModel& model, const StateField& field0,
                             const TimeGrid& grid,
                             const std::vector<double>& sample_times);

/// Occupied-band eigenvector field of `model` at time t, lowest n_occupied
/// bands per grid point, with a deterministic phase convention (the
/// largest-magnitude component of each vector is made real positive).
StateField ground_state_field(const BlochModel& model, const ParamGrid& grid,
                              double t, int n_occupied);

}  // namespace topoquench
