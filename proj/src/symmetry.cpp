#include "topoquench/symmetry.hpp"

#include <cmath>

#include "topoquench/errors.hpp"

namespace topoquench {

namespace {

// Additive recurrence with irrational strides; reproducible and roughly
// uniform over the BZ.
double lds(int n, double alpha) {
  const double x = std::fmod(0.5 + n * alpha, 1.0);
  return -kPi + kTwoPi * x;
}

SymmetryReport trs_condition_report(const BlochModel& model,
                                    const TrsOperator& t_op, double sign,
                                    const std::string& name, double t_lo,
                                    double t_hi, int count) {
  SymmetryReport report;
  report.name = name;
  report.tolerance = 1e-10;
  const auto points = symmetry_sample_points(count, model.spatial_dims);
  for (int n = 0; n < count; ++n) {
    const Momentum k = points[n];
    const double t =
        t_lo + (t_hi - t_lo) * std::fmod(0.5 + n * 0.5545497339, 1.0);
    const Matrix lhs =
        t_op.u * model.evaluate(k, t).conjugate() * t_op.u.adjoint();
    const Matrix rhs = sign * model.evaluate(k.negated(), t);
    const double res = (lhs - rhs).cwiseAbs().maxCoeff();
    if (res > report.max_residual) {
      report.max_residual = res;
      report.worst_k = k;
      report.worst_t = t;
    }
  }
  report.pass = report.max_residual < report.tolerance;
  return report;
}

}  // namespace

std::vector<Momentum> symmetry_sample_points(int count, int spatial_dims) {
  std::vector<Momentum> points(count);
  for (int n = 0; n < count; ++n) {
    points[n].x = lds(n, 0.7548776662);
    if (spatial_dims == 2) points[n].y = lds(n, 0.5698402910);
  }
  return points;
}

SymmetryReport check_trs_static(const BlochModel& model,
                                const TrsOperator& t_op, double t) {
  return trs_condition_report(model, t_op, +1.0, "trs_static", t, t, 100);
}

SymmetryReport check_trs_quench(const BlochModel& model,
                                const TrsOperator& t_op, double t_lo,
                                double t_hi) {
  return trs_condition_report(model, t_op, -1.0, "trs_quench", t_lo, t_hi,
                              100);
}

SymmetryReport check_propagator_trs(const ParamGrid& grid,
                                    const std::vector<Matrix>& propagators,
                                    const TrsOperator& t_op) {
  if (int(propagators.size()) != grid.size())
    throw InvalidGridError("one propagator per grid point required");
  SymmetryReport report;
  report.name = "propagator_trs";
  report.tolerance = 1e-8;
  for (int p = 0; p < grid.size(); ++p) {
    const Matrix lhs =
        t_op.u * propagators[p].conjugate() * t_op.u.adjoint();
    const double res =
        (lhs - propagators[grid.negate(p)]).cwiseAbs().maxCoeff();
    if (res > report.max_residual) {
      report.max_residual = res;
      report.worst_k = grid.point(p);
    }
  }
  report.pass = report.max_residual < report.tolerance;
  return report;
}

Matrix auxiliary_hamiltonian(const Propagator& u, const Matrix& h0) {
  if (unitarity_residual(u.matrix) > 1e-10)
    throw NumericError("auxiliary_hamiltonian requires a unitary propagator");
  return u.matrix * h0 * u.matrix.adjoint();
}

TrsOperator auxiliary_trs(const Propagator& u_plus_k,
                          const Propagator& u_minus_k,
                          const TrsOperator& t0) {
  if (unitarity_residual(u_plus_k.matrix) > 1e-10 ||
      unitarity_residual(u_minus_k.matrix) > 1e-10)
    throw NumericError("auxiliary_trs requires unitary propagators");
  return {Matrix(u_minus_k.matrix * t0.u * u_plus_k.matrix.transpose())};
}

}  // namespace topoquench
