#pragma once

#include <string>
#include <vector>

#include "topoquench/models.hpp"
#include "topoquench/types.hpp"

namespace topoquench {

struct SymmetryReport {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Momentum worst_k;
  double worst_t = 0.0;
};

/// Momenta used by the sampled symmetry checks: a fixed, reproducible set
/// covering the BZ (deterministic low-discrepancy sequence).
std::vector<Momentum> symmetry_sample_points(int count, int spatial_dims);

/// Static TRS: u_T H*(k, t) u_T^dag = H(-k, t) over sampled k at fixed t.
SymmetryReport check_trs_static(const BlochModel& model,
                                const TrsOperator& t_op, double t);

/// Quench (TRS-odd) condition: u_T H*(k, t) u_T^dag = -H(-k, t) over
/// sampled (k, t) in [t_lo, t_hi].
SymmetryReport check_trs_quench(const BlochModel& model,
                                const TrsOperator& t_op, double t_lo,
                                double t_hi);

/// Propagator transport of TRS: u_T U*(k) u_T^dag = U(-k) for propagators
/// stored on a negation-symmetric grid.
SymmetryReport check_propagator_trs(const ParamGrid& grid,
                                    const std::vector<Matrix>& propagators,
                                    const TrsOperator& t_op);

/// H^a = U H0 U^dag; evolved states are its eigenvectors with the initial
/// eigenvalues.
Matrix auxiliary_hamiltonian(const Propagator& u, const Matrix& h0);

/// Transported TRS operator for the auxiliary Hamiltonian:
/// u_a = U(-k) u0 U(k)^T.
TrsOperator auxiliary_trs(const Propagator& u_plus_k,
                          const Propagator& u_minus_k,
                          const TrsOperator& t0);

}  // namespace topoquench
