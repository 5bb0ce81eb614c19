#include "doctest.h"

#include "cerom/errors.hpp"
#include "cerom/pod.hpp"
#include "fixtures.hpp"

using namespace cerom;

namespace {

SnapshotSet rank_one_set() {
  const Mesh1D mesh = build_mesh(32);
  const auto fe = assemble_matrices(mesh);
  SnapshotSet set;
  const NodalField u = initial_condition(InitialCondition::smooth, 0.1, mesh);
  set.Y = u.replicate(1, 5);
  set.mass = fe.mass;
  set.stiffness = fe.stiffness;
  set.dt = 0.1;
  return set;
}

} // namespace

TEST_CASE("rank-one snapshots give one mode") {
  const SnapshotSet set = rank_one_set();
  const PodBasis basis = compute_pod(set);
  REQUIRE(basis.d == 1);
  const Eigen::VectorXd u = set.Y.col(0);
  const Eigen::VectorXd expected = u / std::sqrt(u.dot(set.mass * u));
  CHECK((basis.Phi.col(0) - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(basis.spectrum.tail(4).cwiseAbs().maxCoeff() <= 1e-12 * basis.lambda[0]);
}

TEST_CASE("default tolerance recovers d=7 and d=3 for the smooth runs") {
  PodOptions opts; // default rank_tol
  CHECK(compute_pod(fixtures::smooth_nu1e1().snapshots, opts).d == 7);
  CHECK(compute_pod(fixtures::smooth_nu1e3().snapshots, opts).d == 3);
}

TEST_CASE("basis invariants") {
  const auto &data = fixtures::smooth_nu1e1();
  const PodBasis &b = data.basis;
  CHECK(orthonormality_defect(b, data.snapshots.mass) < 1e-10);
  for (Eigen::Index j = 1; j < b.spectrum.size(); ++j)
    CHECK(b.spectrum[j] <= b.spectrum[j - 1]);
  CHECK(b.spectrum.minCoeff() >= 0.0);
  CHECK((b.M_full - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::LLT<Eigen::MatrixXd> llt(b.S_full);
  CHECK(llt.info() == Eigen::Success);
  for (Eigen::Index j = 0; j < b.d; ++j) {
    Eigen::Index at;
    b.Phi.col(j).cwiseAbs().maxCoeff(&at);
    CHECK(b.Phi(at, j) > 0.0);
  }
}

TEST_CASE("reduce_trajectory projects onto the basis") {
  const auto &data = fixtures::smooth_nu1e1();
  const PodBasis &b = data.basis;
  SnapshotSet probe = data.snapshots;

  probe.Y = b.Phi.col(1).replicate(1, 2);
  ReducedTrajectory t = reduce_trajectory(probe, b);
  CHECK((t.coeffs.row(0).transpose() - Eigen::VectorXd::Unit(7, 1)).cwiseAbs().maxCoeff() < 1e-12);

  // Remove the span of Phi (in M_h) from a random field.
  std::mt19937_64 rng(21);
  const Eigen::VectorXd x = fixtures::random_vector(rng, probe.Y.rows());
  const Eigen::VectorXd orth = x - b.Phi * (b.Phi.transpose() * (probe.mass * x));
  probe.Y = orth.replicate(1, 2);
  t = reduce_trajectory(probe, b);
  CHECK(t.coeffs.cwiseAbs().maxCoeff() < 1e-12 * std::sqrt(x.dot(probe.mass * x)));

  // Projection optimality.
  probe.Y = x.replicate(1, 2);
  t = reduce_trajectory(probe, b);
  const Eigen::VectorXd a = t.coeffs.row(0).transpose();
  auto err = [&](const Eigen::VectorXd &c) {
    const Eigen::VectorXd e = x - b.Phi * c;
    return std::sqrt(e.dot(probe.mass * e));
  };
  const double best = err(a);
  for (int k = 0; k < 100; ++k)
    CHECK(best <= err(a + fixtures::random_vector(rng, 7, 1e-3)));

  SnapshotSet wrong = probe;
  wrong.Y = Eigen::MatrixXd::Zero(5, 2);
  CHECK_THROWS_AS(reduce_trajectory(wrong, b), ConfigError);
}

TEST_CASE("reconstruction error is non-increasing in r") {
  const auto &data = fixtures::smooth_nu1e1();
  const auto &M = data.snapshots.mass;
  for (Eigen::Index j : {Eigen::Index(0), Eigen::Index(250), Eigen::Index(1000)}) {
    const Eigen::VectorXd u = data.snapshots.Y.col(j);
    double prev = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 1; r <= data.basis.d; ++r) {
      const Eigen::VectorXd e =
          u - data.basis.Phi.leftCols(r) * data.traj.coeffs.row(j).head(r).transpose();
      const double err = std::sqrt(e.dot(M * e));
      CHECK(err <= prev * (1.0 + 1e-12));
      prev = err;
    }
  }
}

TEST_CASE("reduced blocks") {
  const auto &data = fixtures::smooth_nu1e1();
  const ReducedBlocks full = reduced_blocks(data.basis, 7);
  CHECK(full.M_rd.cols() == 7);
  CHECK((full.M_rd - full.M_r).cwiseAbs().maxCoeff() == 0.0);

  const ReducedBlocks two = reduced_blocks(data.basis, 2);
  CHECK((two.M_r - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(two.S_rd.rows() == 2);
  CHECK(two.S_rd.cols() == 7);

  // S_r against int phi_i' phi_j' dx with piecewise-constant slopes.
  const double h = data.mesh->h();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Eigen::VectorXd di = fixtures::element_slopes(fixtures::pad(data.basis.Phi.col(i)), h);
      const Eigen::VectorXd dj = fixtures::element_slopes(fixtures::pad(data.basis.Phi.col(j)), h);
      CHECK(two.S_r(i, j) == doctest::Approx(h * di.dot(dj)).epsilon(1e-10));
    }

  CHECK_THROWS_AS(reduced_blocks(data.basis, 0), ConfigError);
  CHECK_THROWS_AS(reduced_blocks(data.basis, 8), ConfigError);
}

TEST_CASE("POD error paths") {
  SnapshotSet zero = rank_one_set();
  zero.Y.setZero();
  CHECK_THROWS_WITH_AS(compute_pod(zero), "zero-energy snapshots", NumericalError);

  const SnapshotSet one = rank_one_set();
  PodOptions opts;
  opts.pinned_d = 3;
  CHECK_THROWS_AS(compute_pod(one, opts), ConfigError);
  opts = PodOptions{};
  opts.rank_tol = 1.5;
  CHECK_THROWS_AS(compute_pod(one, opts), ConfigError);
}
