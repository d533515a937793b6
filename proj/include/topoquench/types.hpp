#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace topoquench {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A point in the parameter space (loop parameter or crystal momentum),
/// components in [-pi, pi) with lattice constant a = 1.
struct Momentum {
  double x = 0.0;
  double y = 0.0;

  double operator[](int dir) const { return dir == 0 ? x : y; }

  Momentum negated() const { return {-x, -y}; }
  Momentum shifted(int dir, double delta) const {
    return dir == 0 ? Momentum{x + delta, y} : Momentum{x, y + delta};
  }
};

/// Uniform sampling of the closed parameter space: a loop of nx points
/// (dims == 1) or an nx-by-ny torus (dims == 2). Only independent samples
/// are stored; the seam is closed by the periodic index maps below.
struct ParamGrid {
  int dims = 1;
  int nx = 0;
  int ny = 1;

  int size() const { return nx * ny; }
  int count(int dir) const { return dir == 0 ? nx : ny; }
  double spacing(int dir) const { return kTwoPi / count(dir); }

  int index(int i, int j) const { return j * nx + i; }
  int wrap(int i, int dir) const {
    const int n = count(dir);
    return ((i % n) + n) % n;
  }
  /// Index of the neighbor one step along `dir` (periodic).
  int neighbor(int flat, int dir, int step = 1) const {
    int i = flat % nx;
    int j = flat / nx;
    if (dir == 0)
      i = wrap(i + step, 0);
    else
      j = wrap(j + step, 1);
    return index(i, j);
  }
  /// Index of -k on the grid (the grid is symmetric under negation).
  int negate(int flat) const {
    const int i = flat % nx;
    const int j = flat / nx;
    return index(wrap(-i, 0), dims == 2 ? wrap(-j, 1) : 0);
  }

  Momentum point(int i, int j) const {
    Momentum k;
    k.x = -kPi + kTwoPi * i / nx;
    if (dims == 2) k.y = -kPi + kTwoPi * j / ny;
    return k;
  }
  Momentum point(int flat) const { return point(flat % nx, flat / nx); }

  bool operator==(const ParamGrid&) const = default;
};

/// Occupied-band wave functions on a ParamGrid at one instant. states[p] is
/// a dim x n_occupied matrix of orthonormal columns at grid point p.
struct StateField {
  ParamGrid grid;
  double time = 0.0;
  std::vector<Matrix> states;

  int occupied() const { return states.empty() ? 0 : int(states[0].cols()); }
  int dim() const { return states.empty() ? 0 : int(states[0].rows()); }
};

/// Accumulated unitary at a fixed grid point, the ordered product of
/// short-time exponentials.
struct Propagator {
  Matrix matrix;
};

inline double hermiticity_residual(const Matrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

inline double unitarity_residual(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace topoquench
