#include "topoquench/models.hpp"

#include <cmath>

#include "topoquench/errors.hpp"

namespace topoquench {

namespace {

const Complex kI{0.0, 1.0};

void require_finite(double value, const char* name) {
  if (!std::isfinite(value))
    throw InvalidParameterError(std::string("non-finite parameter: ") + name);
}

/// d-vector of the two-band Chern model.
struct DVector {
  double dx, dy, dz;
};

DVector chern_d(double m, Momentum k) {
  return {std::sin(k.x), std::sin(k.y), m + std::cos(k.x) + std::cos(k.y)};
}

DVector chern_d_grad(Momentum k, int dir) {
  if (dir == 0) return {std::cos(k.x), 0.0, -std::sin(k.x)};
  return {0.0, std::cos(k.y), -std::sin(k.y)};
}

Matrix d_dot_sigma(const DVector& d) {
  Matrix h(2, 2);
  h(0, 0) = d.dz;
  h(1, 1) = -d.dz;
  h(0, 1) = Complex(d.dx, -d.dy);
  h(1, 0) = Complex(d.dx, d.dy);
  return h;
}

Matrix embed_blocks(const Matrix& up, const Matrix& down) {
  Matrix h = Matrix::Zero(4, 4);
  h.block(0, 0, 2, 2) = up;
  h.block(2, 2, 2, 2) = down;
  return h;
}

}  // namespace

Matrix pauli_x() {
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Matrix pauli_y() {
  Matrix s(2, 2);
  s << 0, -kI, kI, 0;
  return s;
}

Matrix pauli_z() {
  Matrix s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

double QuenchProtocol::mix(double t) const {
  switch (kind) {
    case Kind::sudden:
      return t > t_start ? 1.0 : 0.0;
    case Kind::linear_ramp: {
      if (t <= t_start) return 0.0;
      if (t >= t_end) return 1.0;
      return (t - t_start) / (t_end - t_start);
    }
    case Kind::smooth_tanh: {
      const double center = 0.5 * (t_start + t_end);
      return 0.5 * (1.0 + std::tanh((t - center) / width));
    }
  }
  return 0.0;
}

BlochModel build_lz_parameterized(double v, double g) {
  require_finite(v, "v");
  require_finite(g, "g");
  if (g < 0.0) throw InvalidParameterError("coupling g must be >= 0");
  if (v <= 0.0) throw InvalidParameterError("sweep rate v must be > 0");

  BlochModel model;
  model.dim = 2;
  model.spatial_dims = 1;
  model.evaluate = [v, g](Momentum k, double t) {
    Matrix h(2, 2);
    h(0, 0) = v * t;
    h(1, 1) = -v * t;
    h(0, 1) = g * Complex(std::cos(k.x), std::sin(k.x));
    h(1, 0) = std::conj(h(0, 1));
    return h;
  };
  model.gradient = [g](Momentum k, double, int) {
    // g (-sigma_x sin(lambda) - sigma_y cos(lambda))
    Matrix h = Matrix::Zero(2, 2);
    h(0, 1) = g * Complex(-std::sin(k.x), std::cos(k.x));
    h(1, 0) = std::conj(h(0, 1));
    return h;
  };
  return model;
}

BlochModel build_two_band_chern(double m) {
  require_finite(m, "m");

  BlochModel model;
  model.dim = 2;
  model.spatial_dims = 2;
  model.evaluate = [m](Momentum k, double) { return d_dot_sigma(chern_d(m, k)); };
  model.gradient = [](Momentum k, double, int dir) {
    return d_dot_sigma(chern_d_grad(k, dir));
  };
  return model;
}

TrsOperator bhz_trs() {
  // u_T = (i sigma_y in spin space) x identity.
  Matrix u = Matrix::Zero(4, 4);
  u(0, 2) = 1.0;
  u(1, 3) = 1.0;
  u(2, 0) = -1.0;
  u(3, 1) = -1.0;
  return {u};
}

BlochModel build_bhz(double m) {
  require_finite(m, "m");

  BlochModel model;
  model.dim = 4;
  model.spatial_dims = 2;
  model.symmetry_tags = {"trs_even", "block_diagonal_spin"};
  model.evaluate = [m](Momentum k, double) {
    const Matrix up = d_dot_sigma(chern_d(m, k));
    const Matrix down = d_dot_sigma(chern_d(m, k.negated())).conjugate();
    return embed_blocks(up, down);
  };
  model.gradient = [](Momentum k, double, int dir) {
    const Matrix up = d_dot_sigma(chern_d_grad(k, dir));
    // d/dk_mu of h_up*(-k) is -conj(grad h_up at -k).
    const Matrix down =
        -d_dot_sigma(chern_d_grad(k.negated(), dir)).conjugate();
    return embed_blocks(up, down);
  };
  return model;
}

BlochModel build_quench(const BlochModel& initial, const BlochModel& final_,
                        const QuenchProtocol& protocol) {
  if (initial.dim != final_.dim ||
      initial.spatial_dims != final_.spatial_dims)
    throw InvalidCompositionError(
        "quench endpoints must share dimension and spatial_dims");

  BlochModel model;
  model.dim = initial.dim;
  model.spatial_dims = initial.spatial_dims;
  model.evaluate = [initial, final_, protocol](Momentum k, double t) {
    const double s = protocol.mix(t);
    if (s <= 0.0) return initial.evaluate(k, t);
    if (s >= 1.0) return final_.evaluate(k, t);
    return Matrix((1.0 - s) * initial.evaluate(k, t) +
                  s * final_.evaluate(k, t));
  };
  model.gradient = [initial, final_, protocol](Momentum k, double t, int dir) {
    const double s = protocol.mix(t);
    if (s <= 0.0) return initial.gradient(k, t, dir);
    if (s >= 1.0) return final_.gradient(k, t, dir);
    return Matrix((1.0 - s) * initial.gradient(k, t, dir) +
                  s * final_.gradient(k, t, dir));
  };
  return model;
}

BlochModel build_trs_odd_quench(const BlochModel& base,
                                const SpinBlockMap& v_up,
                                std::function<double(double)> amplitude) {
  if (base.dim != 4 || !base.has_tag("block_diagonal_spin"))
    throw InvalidCompositionError(
        "trs-odd quench requires a 4-band block-diagonal spin model");
  // Hermiticity of the supplied block, probed on a fixed sample.
  for (int i = 0; i < 8; ++i) {
    const Momentum k{-kPi + kTwoPi * i / 8.0, -kPi + kTwoPi * ((3 * i) % 8) / 8.0};
    if (hermiticity_residual(v_up.evaluate(k)) > 1e-12)
      throw InvalidParameterError("v_up must be Hermitian");
  }

  BlochModel model;
  model.dim = 4;
  model.spatial_dims = base.spatial_dims;
  model.symmetry_tags = {"trs_odd", "block_diagonal_spin"};
  model.evaluate = [v_up, amplitude](Momentum k, double t) {
    const double f = amplitude(t);
    const Matrix up = f * v_up.evaluate(k);
    const Matrix down = -f * v_up.evaluate(k.negated()).conjugate();
    return embed_blocks(up, down);
  };
  model.gradient = [v_up, amplitude](Momentum k, double t, int dir) {
    const double f = amplitude(t);
    const Matrix up = f * v_up.gradient(k, dir);
    const Matrix down = f * v_up.gradient(k.negated(), dir).conjugate();
    return embed_blocks(up, down);
  };
  return model;
}

BlochModel extract_spin_block(const BlochModel& model, int block) {
  if (model.dim != 4 || !model.has_tag("block_diagonal_spin"))
    throw InvalidCompositionError(
        "spin block extraction requires a 4-band block-diagonal model");
  const int off = 2 * block;
  BlochModel out;
  out.dim = 2;
  out.spatial_dims = model.spatial_dims;
  out.evaluate = [model, off](Momentum k, double t) {
    return Matrix(model.evaluate(k, t).block(off, off, 2, 2));
  };
  out.gradient = [model, off](Momentum k, double t, int dir) {
    return Matrix(model.gradient(k, t, dir).block(off, off, 2, 2));
  };
  return out;
}

SpinBlockMap default_quench_block() {
  SpinBlockMap map;
  map.evaluate = [](Momentum k) {
    return d_dot_sigma({std::sin(k.x), std::sin(k.y),
                        std::cos(k.x) + std::cos(k.y)});
  };
  map.gradient = [](Momentum k, int dir) {
    if (dir == 0)
      return d_dot_sigma({std::cos(k.x), 0.0, -std::sin(k.x)});
    return d_dot_sigma({0.0, std::cos(k.y), -std::sin(k.y)});
  };
  return map;
}

}  // namespace topoquench
