#include "doctest.h"

#include <cmath>

#include "cerom/errors.hpp"
#include "cerom/filters_ce.hpp"
#include "fixtures.hpp"

using namespace cerom;

namespace {

const FilterSpec kProjection{FilterKind::projection, 0.0};

FilterSpec df(double delta) { return {FilterKind::differential, delta}; }

double ce_norm(const cerom::Dataset &data, Eigen::Index r, const FilterSpec &spec) {
  const FilterOperator f(reduced_blocks(data.basis, r), spec);
  const auto samples = ce_trajectory(data.traj, f);
  return avg_ce_norm(samples, f.blocks().M_r, data.traj.dt, data.traj.dt * static_cast<double>(samples.size()));
}

} // namespace

TEST_CASE("projection filter at full rank is the identity") {
  const auto &data = fixtures::smooth_nu1e1();
  std::mt19937_64 rng(1);
  const Eigen::VectorXd a = fixtures::random_vector(rng, 7);
  CHECK((apply_filter(a, 7, kProjection, data.basis) - a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("differential filter with delta = 0 is the projection filter") {
  const auto &data = fixtures::smooth_nu1e1();
  std::mt19937_64 rng(2);
  const Eigen::VectorXd a = fixtures::random_vector(rng, 7);
  for (Eigen::Index r = 1; r <= 7; ++r) {
    CHECK((apply_filter(a, r, df(0.0), data.basis) - apply_filter(a, r, kProjection, data.basis)).norm() == 0.0);
    const CeSample s0 = ce_coefficients(a, r, df(0.0), data.basis);
    const CeSample sp = ce_coefficients(a, r, kProjection, data.basis);
    CHECK((s0.b - sp.b).norm() == 0.0);
    CHECK((s0.c - sp.c).norm() == 0.0);
  }
}

TEST_CASE("differential filter matches a dense solve assembled from raw quadrature") {
  const auto &data = fixtures::smooth_nu1e1();
  const double h = data.mesh->h();
  const double delta = 0.1;
  const Eigen::Index r = 2, d = 7;
  Eigen::MatrixXd M(r, d), S(r, d);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(2049);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const Eigen::VectorXd pi = fixtures::pad(data.basis.Phi.col(i));
      const Eigen::VectorXd pj = fixtures::pad(data.basis.Phi.col(j));
      M(i, j) = fixtures::simpson_triple(pi, pj, one, h);
      S(i, j) = h * fixtures::element_slopes(pi, h).dot(fixtures::element_slopes(pj, h));
    }
  const Eigen::MatrixXd lhs = M.leftCols(r) + delta * delta * S.leftCols(r);
  std::mt19937_64 rng(3);
  const Eigen::VectorXd a = fixtures::random_vector(rng, d);
  const Eigen::VectorXd ref = lhs.fullPivLu().solve(M * a);
  const Eigen::VectorXd got = apply_filter(a, r, df(delta), data.basis);
  CHECK((got - ref).norm() <= 1e-10 * ref.norm());

  const CeSample s = ce_coefficients(a, r, df(delta), data.basis);
  const Eigen::VectorXd b_ref = -M.leftCols(r).fullPivLu().solve(S.leftCols(r) * ref);
  const Eigen::VectorXd c_ref = -lhs.fullPivLu().solve(S * a);
  CHECK((s.b - b_ref).norm() <= 1e-9 * b_ref.norm());
  CHECK((s.c - c_ref).norm() <= 1e-9 * c_ref.norm());
}

TEST_CASE("projection filter is idempotent") {
  const auto &data = fixtures::smooth_nu1e1();
  std::mt19937_64 rng(4);
  for (Eigen::Index r = 1; r < 7; ++r) {
    const Eigen::VectorXd a = fixtures::random_vector(rng, 7);
    const Eigen::VectorXd once = apply_filter(a, r, kProjection, data.basis);
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(7);
    padded.head(r) = once;
    CHECK((apply_filter(padded, r, kProjection, data.basis) - once).norm() <= 1e-13 * once.norm());
  }
}

TEST_CASE("projection CE vanishes at full rank and on the leading subspace") {
  const auto &data = fixtures::smooth_nu1e1();
  std::mt19937_64 rng(5);
  const Eigen::VectorXd a = fixtures::random_vector(rng, 7);
  const CeSample full = ce_coefficients(a, 7, kProjection, data.basis);
  CHECK((full.b - full.c).norm() <= 1e-12 * full.c.norm());

  // a_d with zero trailing entries: the S_{r x d} coupling to modes > r is unused.
  Eigen::VectorXd lead = Eigen::VectorXd::Zero(7);
  lead.head(3) = a.head(3);
  const CeSample s = ce_coefficients(lead, 3, kProjection, data.basis);
  CHECK((s.b - s.c).norm() <= 1e-11 * s.c.norm());
  // ...and a generic a_d does produce a CE.
  const CeSample g = ce_coefficients(a, 3, kProjection, data.basis);
  CHECK((g.b - g.c).norm() > 1e-3 * g.c.norm());

  CHECK(ce_norm(data, 7, kProjection) <= 1e-12);
}

TEST_CASE("average CE norm") {
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  std::vector<CeSample> samples(10, CeSample{Eigen::Vector2d(3.0, 4.0), Eigen::Vector2d(0.0, 0.0), 0.0});
  CHECK(avg_ce_norm(samples, I, 0.1, 1.0) == doctest::Approx(5.0));
  std::vector<CeSample> zero(4, CeSample{Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(1.0, 2.0), 0.0});
  CHECK(avg_ce_norm(zero, I, 0.1, 0.4) == 0.0);
  CHECK_THROWS_AS(avg_ce_norm(std::vector<CeSample>{}, I, 0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(avg_ce_norm(samples, I, 0.1, 2.0), ConfigError);
}

TEST_CASE("projection CE reproduces the smooth nu=0.1 values") {
  const auto &data = fixtures::smooth_nu1e1();
  CHECK(ce_norm(data, 2, kProjection) == doctest::Approx(1.54e-1).epsilon(0.01));
  CHECK(ce_norm(data, 6, kProjection) == doctest::Approx(1.15e-4).epsilon(0.01));
}

TEST_CASE("differential CE converges to projection CE at second order in delta") {
  const auto &data = fixtures::smooth_nu1e1();
  for (Eigen::Index r : {Eigen::Index(2), Eigen::Index(4)}) {
    const FilterOperator proj(reduced_blocks(data.basis, r), kProjection);
    auto gap = [&](double delta) {
      const FilterOperator f(reduced_blocks(data.basis, r), df(delta));
      Eigen::MatrixXd E(data.traj.count(), r);
      for (Eigen::Index j = 0; j < data.traj.count(); ++j) {
        const Eigen::VectorXd a = data.traj.coeffs.row(j).transpose();
        const CeSample s = f.ce(a), p = proj.ce(a);
        E.row(j) = ((s.b - s.c) - (p.b - p.c)).transpose();
      }
      return time_average(E, f.blocks().M_r, data.traj.dt, data.traj.dt * static_cast<double>(E.rows()));
    };
    const double g2 = gap(1e-2), g3 = gap(1e-3);
    CHECK(gap(1e-1) > g2);
    CHECK(std::log10(g2 / g3) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("CE norm is invariant under re-signing a basis vector") {
  const auto &data = fixtures::smooth_nu1e1();
  cerom::Dataset flipped = data;
  flipped.basis.Phi.col(2) *= -1.0;
  const auto &M = data.snapshots.mass;
  const auto &S = data.snapshots.stiffness;
  flipped.basis.M_full = flipped.basis.Phi.transpose() * (M * flipped.basis.Phi);
  flipped.basis.S_full = flipped.basis.Phi.transpose() * (S * flipped.basis.Phi);
  flipped.traj = reduce_trajectory(data.snapshots, flipped.basis);
  for (Eigen::Index r : {Eigen::Index(2), Eigen::Index(4)}) {
    CHECK(ce_norm(flipped, r, kProjection) == doctest::Approx(ce_norm(data, r, kProjection)).epsilon(1e-10));
    CHECK(ce_norm(flipped, r, df(0.01)) == doctest::Approx(ce_norm(data, r, df(0.01))).epsilon(1e-10));
  }
}

TEST_CASE("filter argument validation") {
  const auto &data = fixtures::smooth_nu1e1();
  CHECK_THROWS_AS(FilterOperator(reduced_blocks(data.basis, 2), df(-1.0)), ConfigError);
  const FilterOperator f(reduced_blocks(data.basis, 2), kProjection);
  CHECK_THROWS_AS(f.apply(Eigen::VectorXd::Zero(3)), ConfigError);
  CHECK(parse_filter_kind("df") == FilterKind::differential);
  CHECK_THROWS_AS(parse_filter_kind("box"), ConfigError);
}
