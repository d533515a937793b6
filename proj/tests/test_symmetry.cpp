#include <doctest.h>

#include <cmath>

#include "topoquench/errors.hpp"
#include "topoquench/evolve.hpp"
#include "topoquench/models.hpp"
#include "topoquench/symmetry.hpp"

using namespace topoquench;

namespace {

double matdiff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

BlochModel zero_model(int dim, int spatial_dims) {
  BlochModel model;
  model.dim = dim;
  model.spatial_dims = spatial_dims;
  model.evaluate = [dim](Momentum, double) {
    return Matrix(Matrix::Zero(dim, dim));
  };
  model.gradient = [dim](Momentum, double, int) {
    return Matrix(Matrix::Zero(dim, dim));
  };
  return model;
}

BlochModel trs_odd_default() {
  return build_trs_odd_quench(build_bhz(-1.0), default_quench_block(),
                              [](double t) { return t > 0.0 ? 1.0 : 0.0; });
}

/// Two-band model embedded in the 4-band space so the BHZ u_T applies;
/// breaks TRS through the sigma_y term.
BlochModel embedded_two_band() {
  BlochModel model;
  model.dim = 4;
  model.spatial_dims = 2;
  const BlochModel base = build_two_band_chern(-1.0);
  model.evaluate = [base](Momentum k, double t) {
    Matrix h = Matrix::Zero(4, 4);
    h.block(0, 0, 2, 2) = base.evaluate(k, t);
    h.block(2, 2, 2, 2) = base.evaluate(k, t);
    return h;
  };
  model.gradient = [base](Momentum k, double t, int dir) {
    Matrix h = Matrix::Zero(4, 4);
    h.block(0, 0, 2, 2) = base.gradient(k, t, dir);
    h.block(2, 2, 2, 2) = base.gradient(k, t, dir);
    return h;
  };
  return model;
}

}  // namespace

TEST_CASE("sample points are deterministic and cover both axes") {
  const auto a = symmetry_sample_points(50, 2);
  const auto b = symmetry_sample_points(50, 2);
  REQUIRE(a.size() == 50);
  for (int n = 0; n < 50; ++n) {
    CHECK(a[n].x == b[n].x);
    CHECK(a[n].y == b[n].y);
    CHECK(a[n].x >= -kPi);
    CHECK(a[n].x < kPi);
  }
  const auto one_d = symmetry_sample_points(10, 1);
  for (const auto& k : one_d) CHECK(k.y == 0.0);
}

TEST_CASE("static TRS check") {
  const TrsOperator trs = bhz_trs();
  SUBCASE("bhz passes") {
    const SymmetryReport r = check_trs_static(build_bhz(-1.0), trs, 0.0);
    CHECK(r.pass);
    CHECK(r.max_residual < 1e-12);
  }
  SUBCASE("chern model fails with an O(1) residual") {
    const SymmetryReport r = check_trs_static(embedded_two_band(), trs, 0.0);
    CHECK_FALSE(r.pass);
    CHECK(r.max_residual > 0.1);
  }
  SUBCASE("zero hamiltonian passes") {
    CHECK(check_trs_static(zero_model(4, 2), trs, 0.0).pass);
  }
}

TEST_CASE("quench (TRS-odd) check") {
  const TrsOperator trs = bhz_trs();
  SUBCASE("trs-odd quench passes") {
    const SymmetryReport r = check_trs_quench(trs_odd_default(), trs, 0.5, 5.0);
    CHECK(r.pass);
    CHECK(r.max_residual < 1e-12);
  }
  SUBCASE("static bhz is even, not odd") {
    CHECK_FALSE(check_trs_quench(build_bhz(-1.0), trs, 0.0, 1.0).pass);
  }
  SUBCASE("zero hamiltonian is both even and odd") {
    CHECK(check_trs_quench(zero_model(4, 2), trs, 0.0, 1.0).pass);
    CHECK(check_trs_static(zero_model(4, 2), trs, 0.3).pass);
  }
}

TEST_CASE("propagator transport of TRS") {
  const TrsOperator trs = bhz_trs();
  const ParamGrid grid{2, 8, 8};
  const StateField f0 = ground_state_field(build_bhz(-1.0), grid, 0.0, 2);

  SUBCASE("identity propagators pass exactly") {
    std::vector<Matrix> identity(grid.size(), Matrix::Identity(4, 4));
    const SymmetryReport r = check_propagator_trs(grid, identity, trs);
    CHECK(r.pass);
    CHECK(r.max_residual == 0.0);
  }
  SUBCASE("trs-odd evolution transports the pairing") {
    const auto traj =
        evolve_field(trs_odd_default(), f0, {0.0, 2.0, 200}, {2.0});
    const SymmetryReport r = check_propagator_trs(grid, traj.unitaries[0], trs);
    CHECK(r.pass);
    CHECK(r.max_residual < 1e-10);
  }
  SUBCASE("trs-even evolution generally fails") {
    QuenchProtocol p{QuenchProtocol::Kind::sudden, 0.0, 0.0, 0.0};
    const BlochModel q = build_quench(build_bhz(-1.0), build_bhz(3.0), p);
    const auto traj = evolve_field(q, f0, {0.0, 2.0, 200}, {2.0});
    CHECK_FALSE(check_propagator_trs(grid, traj.unitaries[0], trs).pass);
  }
  SUBCASE("size mismatch is rejected") {
    std::vector<Matrix> wrong(3, Matrix::Identity(4, 4));
    CHECK_THROWS_AS(check_propagator_trs(grid, wrong, trs), InvalidGridError);
  }
}

TEST_CASE("auxiliary hamiltonian basics") {
  const Matrix h0 = build_bhz(-1.0).evaluate({0.4, -0.9}, 0.0);
  SUBCASE("identity propagator is a no-op") {
    CHECK(matdiff(auxiliary_hamiltonian({Matrix::Identity(4, 4)}, h0), h0) ==
          0.0);
  }
  SUBCASE("unitary similarity preserves the spectrum") {
    const Matrix u = expm_step(build_bhz(3.0).evaluate({1.0, 0.2}, 0.0), 0.7);
    const Matrix ha = auxiliary_hamiltonian({u}, h0);
    Eigen::SelfAdjointEigenSolver<Matrix> a(h0), b(ha);
    CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("non-unitary input is rejected") {
    CHECK_THROWS_AS(auxiliary_hamiltonian({Matrix(2.0 * Matrix::Identity(4, 4))},
                                          h0),
                    NumericError);
  }
}

TEST_CASE("evolved states are auxiliary eigenvectors") {
  const BlochModel bhz = build_bhz(-1.0);
  const ParamGrid grid{2, 8, 8};
  const StateField f0 = ground_state_field(bhz, grid, 0.0, 2);
  const auto traj = evolve_field(trs_odd_default(), f0, {0.0, 3.0, 300}, {3.0});
  for (int p = 0; p < grid.size(); ++p) {
    const Matrix h0 = bhz.evaluate(grid.point(p), 0.0);
    const Matrix ha = auxiliary_hamiltonian({traj.unitaries[0][p]}, h0);
    const Matrix& psi0 = f0.states[p];
    const Matrix& psi = traj.fields[0].states[p];
    const Eigen::VectorXd energies =
        (psi0.adjoint() * h0 * psi0).diagonal().real();
    for (int n = 0; n < psi.cols(); ++n) {
      const double res =
          (ha * psi.col(n) - energies(n) * psi.col(n)).cwiseAbs().maxCoeff();
      CHECK(res < 1e-8);
    }
  }
}

TEST_CASE("transported TRS operator") {
  const TrsOperator trs = bhz_trs();
  SUBCASE("identity transport returns the original operator") {
    const Propagator id{Matrix::Identity(4, 4)};
    CHECK(matdiff(auxiliary_trs(id, id, trs).u, trs.u) == 0.0);
  }
  SUBCASE("transported operator validates the auxiliary hamiltonian") {
    const BlochModel bhz = build_bhz(-1.0);
    const ParamGrid grid{2, 8, 8};
    const StateField f0 = ground_state_field(bhz, grid, 0.0, 2);
    const auto traj =
        evolve_field(trs_odd_default(), f0, {0.0, 2.0, 200}, {2.0});
    for (int p = 0; p < grid.size(); ++p) {
      const int q = grid.negate(p);
      const TrsOperator ta = auxiliary_trs({traj.unitaries[0][p]},
                                           {traj.unitaries[0][q]}, trs);
      CHECK(unitarity_residual(ta.u) < 1e-10);
      const Momentum k = grid.point(p);
      const Matrix ha_k = auxiliary_hamiltonian({traj.unitaries[0][p]},
                                                bhz.evaluate(k, 0.0));
      const Matrix ha_neg = auxiliary_hamiltonian(
          {traj.unitaries[0][q]}, bhz.evaluate(k.negated(), 0.0));
      CHECK(matdiff(Matrix(ta.u * ha_k.conjugate() * ta.u.adjoint()), ha_neg) <
            1e-8);
    }
  }
  SUBCASE("non-unitary propagators are rejected") {
    const Propagator bad{Matrix(2.0 * Matrix::Identity(4, 4))};
    const Propagator id{Matrix::Identity(4, 4)};
    CHECK_THROWS_AS(auxiliary_trs(bad, id, trs), NumericError);
  }
}
