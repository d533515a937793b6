#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topoquench/evolve.hpp"
#include "topoquench/models.hpp"
#include "topoquench/types.hpp"

namespace topoquench {

struct ChernResult {
  int value = 0;
  double min_overlap = 1.0;      // smallest link determinant magnitude
  Momentum worst_k;              // where the smallest link sits
  double integer_residual = 0.0; // |flux sum / 2pi - value|
};

/// Total occupied Chern number on the BZ torus by the plaquette
/// link-variable method. Exact integer; gauge independent.
ChernResult lattice_chern(const StateField& field);
int chern_number(const StateField& field);

/// Z2 parity from per-spin Chern numbers: ((c_up - c_down) / 2) mod 2.
/// Requires the TRS pairing c_up + c_down = 0.
int spin_chern_z2(int c_up, int c_down);

struct Z2Result {
  int value = 0;
  double min_overlap = 1.0;
  double pairing_residual = 0.0;  // worst projector mismatch under T
};

/// Half-BZ Z2 index with the gauge on the boundary rows (ky = -pi and
/// ky = 0) fixed by Kramers pairing psi(-k) = T psi(k): the boundary
/// connection minus the interior plaquette flux, mod 2. Requires the field
/// to satisfy the dynamical TRS pairing under T.
Z2Result z2_half_bz_detailed(const StateField& field, const TrsOperator& t_op);
int z2_half_bz(const StateField& field, const TrsOperator& t_op);

/// Splits a field with block-diagonal (spin-conserving) support into
/// per-spin one-band fields. Each occupied projector must be block
/// diagonal to 1e-8 with unit weight per block.
std::pair<StateField, StateField> split_spin_blocks(const StateField& field);

/// One sampled instant of an invariant time series. When the lattice index
/// is not computable at this time (inadmissible grid, broken pairing), the
/// failure is recorded instead of a value.
struct InvariantSample {
  double t = 0.0;
  bool ok = true;
  std::string error;  // error class when !ok
  std::optional<int> c;
  std::optional<int> c_up, c_down;
  std::optional<int> c2;       // half-BZ route
  std::optional<int> c2_spin;  // spin-Chern route
  double min_overlap = 1.0;
  double pairing_residual = 0.0;
};

struct InvariantSeries {
  std::vector<InvariantSample> samples;

  /// True when every sample is ok and the selected member takes a single
  /// value across the series.
  bool constant(std::optional<int> InvariantSample::* member) const;
};

/// Chern number time series of the occupied bands of `initial` evolved
/// under `model` over the window, sampled at `sample_times`.
InvariantSeries chern_series(const BlochModel& model,
                             const StateField& initial, const TimeGrid& window,
                             const std::vector<double>& sample_times);

/// Z2 time series (both the half-BZ and spin-Chern routes) of a
/// block-diagonal TRS-even initial field evolved under a TRS-odd quench.
InvariantSeries z2_series(const BlochModel& model, const StateField& initial,
                          const TimeGrid& window,
                          const std::vector<double>& sample_times,
                          const TrsOperator& t_op);

}  // namespace topoquench
