#include "topoquench/invariants.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "topoquench/errors.hpp"
#include "topoquench/geometry.hpp"

namespace topoquench {

namespace {

struct LinkSet {
  std::vector<Complex> ux, uy;  // unit-modulus link variables per point
  double min_overlap = 1.0;
  Momentum worst_k;
};

/// Normalized link variables U_mu(k) = det<psi(k)|psi(k+mu)> / |det|.
LinkSet build_links(const StateField& field) {
  const ParamGrid& grid = field.grid;
  LinkSet links;
  links.ux.resize(grid.size());
  links.uy.resize(grid.size());
  for (int p = 0; p < grid.size(); ++p) {
    for (int dir = 0; dir < 2; ++dir) {
      const int q = grid.neighbor(p, dir);
      const Complex ov =
          Matrix(field.states[p].adjoint() * field.states[q]).determinant();
      const double mag = std::abs(ov);
      if (mag < links.min_overlap) {
        links.min_overlap = mag;
        links.worst_k = grid.point(p);
      }
      (dir == 0 ? links.ux : links.uy)[p] = mag > 0.0 ? ov / mag : Complex(0);
    }
  }
  return links;
}

void require_admissible(const LinkSet& links) {
  if (links.min_overlap < kAdmissibilityFloor)
    throw InadmissibleGridError(
        "link overlap below admissibility floor; a denser grid is required",
        links.worst_k, links.min_overlap);
}

double plaquette_flux(const LinkSet& links, const ParamGrid& grid, int p) {
  // Sign matches F = dA for A = i<psi|d psi>; the forward link product
  // carries the opposite phase.
  const int px = grid.neighbor(p, 0);
  const int py = grid.neighbor(p, 1);
  return -std::arg(links.ux[p] * links.uy[px] * std::conj(links.ux[py]) *
                   std::conj(links.uy[p]));
}

/// Worst-case mismatch of the occupied projector under the antiunitary
/// pairing k -> -k, after quotienting all gauge freedom (projectors only).
double trs_pairing_residual(const StateField& field, const TrsOperator& t_op) {
  const ParamGrid& grid = field.grid;
  double worst = 0.0;
  for (int p = 0; p < grid.size(); ++p) {
    const Matrix proj = field.states[p] * field.states[p].adjoint();
    const int q = grid.negate(p);
    const Matrix proj_neg = field.states[q] * field.states[q].adjoint();
    const Matrix mapped = t_op.u * proj.conjugate() * t_op.u.adjoint();
    worst = std::max(worst, (proj_neg - mapped).cwiseAbs().maxCoeff());
  }
  return worst;
}

/// Kramers-paired occupied frame at a time-reversal-invariant momentum:
/// columns come in pairs (v, T v).
Matrix kramers_frame(const Matrix& occ, const TrsOperator& t_op) {
  const int dim = int(occ.rows());
  const int n_occ = int(occ.cols());
  if (n_occ % 2 != 0)
    throw SymmetryViolationError(
        "odd occupied count cannot be Kramers paired");
  const Matrix proj = occ * occ.adjoint();
  Matrix frame(dim, n_occ);
  Matrix residual = occ;  // columns spanning the not-yet-paired subspace
  int filled = 0;
  while (filled < n_occ) {
    // First remaining column, orthogonalized against the frame so far.
    Vector v = residual.col(0);
    if (filled > 0) {
      const auto head = frame.leftCols(filled);
      v -= head * (head.adjoint() * v).eval();
    }
    const double nv = v.norm();
    if (nv < 1e-8)
      throw SymmetryViolationError("Kramers pairing construction degenerate");
    v /= nv;
    Vector w = t_op.apply(v);
    w = proj * w;  // must stay inside the occupied space
    const double nw = w.norm();
    if (nw < 1.0 - 1e-6)
      throw SymmetryViolationError(
          "occupied space not invariant under T at a TRIM point");
    w /= nw;
    frame.col(filled) = v;
    frame.col(filled + 1) = w;
    filled += 2;
    if (filled < n_occ) {
      // Deflate the paired plane out of the remaining columns.
      const auto head = frame.leftCols(filled);
      residual = residual - head * (head.adjoint() * residual).eval();
      Eigen::HouseholderQR<Matrix> qr(residual);
      residual = qr.householderQ() * Matrix::Identity(dim, n_occ - filled);
    }
  }
  return frame;
}

}  // namespace

ChernResult lattice_chern(const StateField& field) {
  if (field.grid.dims != 2)
    throw InvalidGridError("chern number requires a 2-D torus field");
  const ParamGrid& grid = field.grid;
  const LinkSet links = build_links(field);
  require_admissible(links);

  double flux = 0.0;
  for (int p = 0; p < grid.size(); ++p) flux += plaquette_flux(links, grid, p);
  const double c = flux / kTwoPi;
  ChernResult result;
  result.value = int(std::lround(c));
  result.min_overlap = links.min_overlap;
  result.worst_k = links.worst_k;
  result.integer_residual = std::abs(c - double(result.value));
  if (result.integer_residual > 1e-9)
    throw NumericError("plaquette flux sum is not an integer multiple of 2pi");
  return result;
}

int chern_number(const StateField& field) { return lattice_chern(field).value; }

int spin_chern_z2(int c_up, int c_down) {
  if (c_up + c_down != 0)
    throw SymmetryViolationError(
        "TRS pairing violated: C_up + C_down must vanish");
  const int half = (c_up - c_down) / 2;
  return ((half % 2) + 2) % 2;
}

Z2Result z2_half_bz_detailed(const StateField& field,
                             const TrsOperator& t_op) {
  const ParamGrid& grid = field.grid;
  if (grid.dims != 2 || grid.nx % 2 != 0 || grid.ny % 2 != 0)
    throw InvalidGridError("z2_half_bz requires an even 2-D torus grid");

  Z2Result result;
  result.pairing_residual = trs_pairing_residual(field, t_op);
  if (result.pairing_residual > 1e-8)
    throw SymmetryViolationError(
        "dynamical TRS pairing violated (residual " +
        std::to_string(result.pairing_residual) +
        "); the Z2 index is not defined for this field");

  // Gauge fixing on the two boundary rows of the half BZ (ky = -pi and
  // ky = 0): the Kramers constraint psi(-k) = T psi(k) makes each link on
  // the kx < 0 half-arc equal to its mirror on the kx > 0 half-arc (the
  // overlap determinants coincide exactly under the antiunitary pairing).
  // Each half-arc link is therefore evaluated once and counted twice, which
  // also removes the branch ambiguity of links sitting on the cut: a branch
  // flip moves the doubled sum by 4 pi and cannot change the parity. Only
  // the TRIM frames need to be fixed explicitly; their residual Kramers
  // gauge freedom has unit determinant and drops out of the links.
  const int half_row = grid.ny / 2;
  const int half_col = grid.nx / 2;
  auto boundary_row_phase = [&](int jb) {
    std::vector<Matrix> frames(grid.nx + 1);
    for (int i = half_col; i <= grid.nx; ++i) {
      const int col = i % grid.nx;
      const Matrix& raw = field.states[grid.index(col, jb)];
      frames[i] = (col == 0 || col == half_col)
                      ? kramers_frame(raw, t_op)
                      : raw;
    }
    double sum = 0.0;
    for (int i = half_col; i < grid.nx; ++i) {
      const Complex ov =
          Matrix(frames[i].adjoint() * frames[i + 1]).determinant();
      if (std::abs(ov) < kAdmissibilityFloor)
        throw InadmissibleGridError(
            "boundary link overlap below admissibility floor",
            grid.point(i % grid.nx, jb), std::abs(ov));
      result.min_overlap = std::min(result.min_overlap, std::abs(ov));
      sum -= std::arg(ov);
    }
    return 2.0 * sum;
  };

  // Boundary of B- traversed counterclockwise: +x along ky = -pi, -x along
  // ky = 0. The interior flux is gauge invariant and uses the raw field.
  const double boundary = boundary_row_phase(0) - boundary_row_phase(half_row);
  const LinkSet links = build_links(field);
  result.min_overlap = std::min(result.min_overlap, links.min_overlap);
  require_admissible(links);
  double flux = 0.0;
  for (int j = 0; j < half_row; ++j)
    for (int i = 0; i < grid.nx; ++i)
      flux += plaquette_flux(links, grid, grid.index(i, j));

  const double d = (boundary - flux) / kTwoPi;
  const long rounded = std::lround(d);
  if (std::abs(d - double(rounded)) > 1e-6)
    throw NumericError("half-BZ mismatch is not an integer multiple of 2pi");
  result.value = int(((rounded % 2) + 2) % 2);
  return result;
}

int z2_half_bz(const StateField& field, const TrsOperator& t_op) {
  return z2_half_bz_detailed(field, t_op).value;
}

std::pair<StateField, StateField> split_spin_blocks(const StateField& field) {
  if (field.dim() != 4 || field.occupied() != 2)
    throw InvalidGridError(
        "spin-block split expects a 4-band field with 2 occupied states");
  StateField up, down;
  up.grid = down.grid = field.grid;
  up.time = down.time = field.time;
  up.states.resize(field.grid.size());
  down.states.resize(field.grid.size());
  for (int p = 0; p < field.grid.size(); ++p) {
    const Matrix proj = field.states[p] * field.states[p].adjoint();
    for (int block = 0; block < 2; ++block) {
      const Matrix sub = proj.block(2 * block, 2 * block, 2, 2);
      Eigen::SelfAdjointEigenSolver<Matrix> solver(sub);
      if (std::abs(solver.eigenvalues()(1) - 1.0) > 1e-8)
        throw SymmetryViolationError(
            "occupied projector is not spin-block diagonal");
      Matrix col = Matrix::Zero(2, 1);
      col.col(0) = solver.eigenvectors().col(1);
      (block == 0 ? up : down).states[p] = col;
    }
  }
  return {up, down};
}

bool InvariantSeries::constant(
    std::optional<int> InvariantSample::* member) const {
  if (samples.empty()) return false;
  for (const auto& s : samples)
    if (!s.ok || !(s.*member) || *(s.*member) != *(samples.front().*member))
      return false;
  return true;
}

InvariantSeries chern_series(const BlochModel& model,
                             const StateField& initial, const TimeGrid& window,
                             const std::vector<double>& sample_times) {
  const FieldTrajectory traj =
      evolve_field(model, initial, window, sample_times);
  InvariantSeries series;
  for (const StateField& field : traj.fields) {
    InvariantSample s;
    s.t = field.time;
    try {
      const ChernResult c = lattice_chern(field);
      s.c = c.value;
      s.min_overlap = c.min_overlap;
    } catch (const InadmissibleGridError& e) {
      s.ok = false;
      s.error = "inadmissible-grid";
      s.min_overlap = e.worst_overlap;
    }
    series.samples.push_back(std::move(s));
  }
  return series;
}

InvariantSeries z2_series(const BlochModel& model, const StateField& initial,
                          const TimeGrid& window,
                          const std::vector<double>& sample_times,
                          const TrsOperator& t_op) {
  const FieldTrajectory traj =
      evolve_field(model, initial, window, sample_times);
  InvariantSeries series;
  for (const StateField& field : traj.fields) {
    InvariantSample s;
    s.t = field.time;
    try {
      const Z2Result z2 = z2_half_bz_detailed(field, t_op);
      s.c2 = z2.value;
      s.min_overlap = z2.min_overlap;
      s.pairing_residual = z2.pairing_residual;
      const auto [up, down] = split_spin_blocks(field);
      s.c_up = chern_number(up);
      s.c_down = chern_number(down);
      s.c2_spin = spin_chern_z2(*s.c_up, *s.c_down);
    } catch (const InadmissibleGridError& e) {
      s.ok = false;
      s.error = "inadmissible-grid";
      s.min_overlap = e.worst_overlap;
    } catch (const SymmetryViolationError&) {
      s.ok = false;
      s.error = "symmetry-violation";
    }
    series.samples.push_back(std::move(s));
  }
  return series;
}

}  // namespace topoquench
