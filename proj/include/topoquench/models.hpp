#pragma once

#include <functional>
#include <set>
#include <string>

#include "topoquench/types.hpp"

namespace topoquench {

/// Antiunitary time-reversal descriptor T = u_T K, with K complex
/// conjugation. Only the unitary part is stored.
struct TrsOperator {
  Matrix u;

  /// T applied to a set of column vectors: u_T * conj(psi).
  Matrix apply(const Matrix& psi) const { return u * psi.conjugate(); }
};

/// A map (k, t) -> complex Hermitian matrix, together with its analytic
/// momentum derivatives and declared symmetry tags. Evaluation is pure;
/// instances are safe to share across threads after construction.
struct BlochModel {
  int dim = 0;
  int spatial_dims = 1;
  std::function<Matrix(Momentum, double)> evaluate;
  std::function<Matrix(Momentum, double, int)> gradient;
  std::set<std::string> symmetry_tags;

  bool has_tag(const std::string& tag) const {
    return symmetry_tags.count(tag) != 0;
  }
};

/// Quench schedule connecting two parameter records in time.
struct QuenchProtocol {
  enum class Kind { sudden, linear_ramp, smooth_tanh };
  Kind kind = Kind::sudden;
  double t_start = 0.0;
  double t_end = 0.0;
  double width = 0.0;  // smooth_tanh only

  /// Mixing weight of the final Hamiltonian at time t, in [0, 1].
  double mix(double t) const;
};

/// A k-dependent 2x2 Hermitian block with analytic momentum derivatives,
/// used as the up-spin generator of a TRS-odd quench.
struct SpinBlockMap {
  std::function<Matrix(Momentum)> evaluate;
  std::function<Matrix(Momentum, int)> gradient;
};

// Pauli matrices (2x2).
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

/// H(lambda, t) = v t sigma_z + g (sigma_x cos(lambda) - sigma_y sin(lambda)),
/// a Landau-Zener sweep carried around a one-dimensional loop.
BlochModel build_lz_parameterized(double v, double g);

/// Two-band lattice model on the square BZ torus:
/// H(k) = sin(kx) sigma_x + sin(ky) sigma_y + (m + cos kx + cos ky) sigma_z.
BlochModel build_two_band_chern(double m);

/// Four-band block model diag(h_up(k), h_up*(-k)) with h_up the two-band
/// Chern matrix. Time-reversal even with u_T = i sigma_y (spin) x identity.
BlochModel build_bhz(double m);

/// The standard TRS operator of build_bhz.
TrsOperator bhz_trs();

/// Time-dependent model interpolating between `initial` and `final` per the
/// protocol.
BlochModel build_quench(const BlochModel& initial, const BlochModel& final_,
                        const QuenchProtocol& protocol);

/// TRS-odd quench generator for a block-diagonal spin model:
/// H(k, t) = diag(f(t) v_up(k), -f(t) v_up*(-k)), which satisfies
/// u_T H*(k, t) u_T^dag = -H(-k, t).
BlochModel build_trs_odd_quench(const BlochModel& base,
                                const SpinBlockMap& v_up,
                                std::function<double(double)> amplitude);

/// 2x2 model acting on one spin block of a block-diagonal 4-band model
/// (block 0 = up, block 1 = down).
BlochModel extract_spin_block(const BlochModel& model, int block);

/// Default v_up used by the CLI z2/bhz quench scenarios:
/// sin(kx) sigma_x + sin(ky) sigma_y + (cos kx + cos ky) sigma_z.
SpinBlockMap default_quench_block();

}  // namespace topoquench
