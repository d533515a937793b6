#pragma once

#include <vector>

#include "topoquench/evolve.hpp"
#include "topoquench/models.hpp"
#include "topoquench/types.hpp"

namespace topoquench {

/// Overlap magnitude below which the grid is declared too coarse for the
/// discrete connection to be meaningful.
inline constexpr double kAdmissibilityFloor = 1e-6;

/// Discrete Berry connection along `dir`, one sample per grid point:
/// A(k) = Im log det<psi(k)|psi(k + delta)> / delta, taken over the
/// occupied set. Sample p lives on the link midpoint between p and its
/// neighbor.
std::vector<double> berry_connection(const StateField& field, int dir);

/// Gauge-invariant Hamiltonian energy eps(k) = sum_occ <psi|dH/dk_mu|psi>.
std::vector<double> hamiltonian_energy(const BlochModel& model,
                                       const StateField& field, int dir,
                                       double t);

/// Max-over-grid residual of |dA/dt - eps| on >= 3 equally spaced snapshots,
/// with dA/dt by central differencing across adjacent sample times.
double hellmann_feynman_residual(const BlochModel& model,
                                 const std::vector<StateField>& trajectory,
                                 int dir);

/// Unwrapped geometric phase around a closed 1-D loop: the sum of
/// principal-valued per-link increments Im log<psi_i|psi_{i+1}>.
double geometric_phase_loop(const StateField& field);

struct LzSample {
  double t;
  Complex a, b;
  double gamma;       // 2 pi |b|^2
  double gamma_rate;  // 4 pi g Im(b* a)
};

/// Landau-Zener sweep under v t sigma_z + g sigma_x, starting from the
/// instantaneous ground state at t0 (which tends to (1, 0)^T as t0 -> -inf),
/// with the loop-parameterized geometric phase and its analytic rate per
/// sample.
std::vector<LzSample> lz_run(double v, double g, double t0, double t1,
                             double dt);

/// Finite-window estimate of the t -> +inf limit of gamma: 2 pi times the
/// population of the instantaneous ground state of H(t) at the final sample,
/// which filters the O(g / v t) oscillatory diabatic admixture out of
/// 2 pi |b|^2.
double lz_gamma_infinity(const LzSample& final_sample, double v, double g);

struct LipschitzReport {
  double measured_max_rate;  // max over steps of |dgamma/dt|
  double bound;              // max over t of the loop integral of |eps|
};

/// Checks the no-jump bound: the measured loop-phase rate against
/// M = max_t of the loop integral of |eps_lambda|.
LipschitzReport phase_lipschitz_bound(
    const BlochModel& model, const std::vector<StateField>& trajectory);

/// Max residual of the Berry-connection decomposition
/// A(k, t) = A(k, 0) + i <psi0| U^dag (d_k U) |psi0>, with d_k U by central
/// differencing over the grid. Both sides are centered at the grid points.
double connection_decomposition_check(const StateField& field0,
                                      const std::vector<Matrix>& propagators,
                                      const StateField& field_t, int dir);

}  // namespace topoquench
