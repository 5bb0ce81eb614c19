#include "cerom/fe1d.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "cerom/errors.hpp"

namespace cerom {

namespace {

// 3-point Gauss rule on [0,1].
struct GaussPoint {
  double xi, weight;
};
constexpr double kGaussOffset = 0.38729833462074168852; // sqrt(3/5)/2
constexpr std::array<GaussPoint, 3> kGauss3{{
    {0.5 - kGaussOffset, 5.0 / 18.0},
    {0.5, 8.0 / 18.0},
    {0.5 + kGaussOffset, 5.0 / 18.0},
}};

// Full-node value with zero Dirichlet data at both ends.
double node_value(const NodalField &u, std::size_t node, std::size_t n_cells) {
  if (node == 0 || node == n_cells)
    return 0.0;
  return u[static_cast<Eigen::Index>(node - 1)];
}

SparseMatrix from_bands(const Tridiagonal &t) {
  const Eigen::Index n = t.size();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(3 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0)
      trips.emplace_back(i, i - 1, t.lower[i]);
    trips.emplace_back(i, i, t.diag[i]);
    if (i + 1 < n)
      trips.emplace_back(i, i + 1, t.upper[i]);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

// Adds a 2x2 element matrix for element `e` (nodes e, e+1) into interior bands.
void scatter(Tridiagonal &t, std::size_t e, std::size_t n_cells, const double local[2][2]) {
  const bool left_interior = e != 0;
  const bool right_interior = e + 1 != n_cells;
  const auto l = static_cast<Eigen::Index>(e) - 1;
  const auto r = static_cast<Eigen::Index>(e);
  if (left_interior)
    t.diag[l] += local[0][0];
  if (right_interior)
    t.diag[r] += local[1][1];
  if (left_interior && right_interior) {
    t.upper[l] += local[0][1];
    t.lower[r] += local[1][0];
  }
}

} // namespace

Mesh1D build_mesh(std::size_t n_cells) {
  if (n_cells < 2)
    throw ConfigError("build_mesh: n_cells must be >= 2, got " + std::to_string(n_cells));
  Mesh1D mesh;
  mesh.n_cells = n_cells;
  mesh.nodes.resize(n_cells + 1);
  for (std::size_t k = 0; k <= n_cells; ++k)
    mesh.nodes[k] = static_cast<double>(k) / static_cast<double>(n_cells);
  return mesh;
}

Eigen::VectorXd Tridiagonal::apply(const Eigen::VectorXd &x) const {
  const Eigen::Index n = size();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0)
      v += lower[i] * x[i - 1];
    if (i + 1 < n)
      v += upper[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

Eigen::VectorXd Tridiagonal::solve(const Eigen::VectorXd &rhs) const {
  const Eigen::Index n = size();
  Eigen::VectorXd c(n), x(n);
  double pivot = diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot))
    throw NumericalError("tridiagonal solve: singular pivot in row 0");
  c[0] = n > 1 ? upper[0] / pivot : 0.0;
  x[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot))
      throw NumericalError("tridiagonal solve: singular pivot in row " + std::to_string(i));
    c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i)
    x[i] -= c[i] * x[i + 1];
  return x;
}

Tridiagonal mass_bands(const Mesh1D &mesh) {
  Tridiagonal t(mesh.interior_dof_count());
  for (std::size_t e = 0; e < mesh.n_cells; ++e) {
    const double h = mesh.nodes[e + 1] - mesh.nodes[e];
    const double local[2][2] = {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}};
    scatter(t, e, mesh.n_cells, local);
  }
  return t;
}

Tridiagonal stiffness_bands(const Mesh1D &mesh) {
  Tridiagonal t(mesh.interior_dof_count());
  for (std::size_t e = 0; e < mesh.n_cells; ++e) {
    const double h = mesh.nodes[e + 1] - mesh.nodes[e];
    const double local[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
    scatter(t, e, mesh.n_cells, local);
  }
  return t;
}

FeMatrices assemble_matrices(const Mesh1D &mesh) {
  return {from_bands(mass_bands(mesh)), from_bands(stiffness_bands(mesh))};
}

Tridiagonal convection_bands(const Mesh1D &mesh, const NodalField &w) {
  Tridiagonal t(mesh.interior_dof_count());
  for (std::size_t e = 0; e < mesh.n_cells; ++e) {
    const double w0 = node_value(w, e, mesh.n_cells);
    const double w1 = node_value(w, e + 1, mesh.n_cells);
    // h * int_0^1 w N_a dxi, times N_b' = -+1/h: the h cancels.
    double wn[2] = {0.0, 0.0};
    for (const auto &q : kGauss3) {
      const double wq = w0 * (1.0 - q.xi) + w1 * q.xi;
      wn[0] += q.weight * wq * (1.0 - q.xi);
      wn[1] += q.weight * wq * q.xi;
    }
    const double local[2][2] = {{-wn[0], wn[0]}, {-wn[1], wn[1]}};
    scatter(t, e, mesh.n_cells, local);
  }
  return t;
}

Eigen::VectorXd convection_load(const Mesh1D &mesh, const NodalField &u) {
  const auto n = static_cast<Eigen::Index>(mesh.interior_dof_count());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (std::size_t e = 0; e < mesh.n_cells; ++e) {
    const double u0 = node_value(u, e, mesh.n_cells);
    const double u1 = node_value(u, e + 1, mesh.n_cells);
    double un[2] = {0.0, 0.0};
    for (const auto &q : kGauss3) {
      const double uq = u0 * (1.0 - q.xi) + u1 * q.xi;
      un[0] += q.weight * uq * (1.0 - q.xi);
      un[1] += q.weight * uq * q.xi;
    }
    const double du = u1 - u0;
    if (e != 0)
      g[static_cast<Eigen::Index>(e) - 1] += du * un[0];
    if (e + 1 != mesh.n_cells)
      g[static_cast<Eigen::Index>(e)] += du * un[1];
  }
  return g;
}

InitialCondition parse_initial_condition(std::string_view name) {
  if (name == "smooth")
    return InitialCondition::smooth;
  if (name == "step")
    return InitialCondition::step;
  throw ConfigError("unknown initial condition '" + std::string(name) + "'");
}

NodalField initial_condition(InitialCondition kind, double nu, const Mesh1D &mesh) {
  constexpr double alpha = 5.0;
  constexpr double beta = 4.0;
  constexpr double pi = std::numbers::pi;
  const auto n = static_cast<Eigen::Index>(mesh.interior_dof_count());
  NodalField u(n);
  switch (kind) {
  case InitialCondition::smooth:
    if (!(nu > 0.0))
      throw ConfigError("smooth initial condition requires nu > 0");
    for (Eigen::Index k = 0; k < n; ++k) {
      const double x = mesh.dof_coordinate(static_cast<std::size_t>(k));
      u[k] = 2.0 * nu * beta * pi * std::sin(pi * x) / (alpha + beta * std::cos(pi * x));
    }
    break;
  case InitialCondition::step:
    for (Eigen::Index k = 0; k < n; ++k)
      u[k] = mesh.dof_coordinate(static_cast<std::size_t>(k)) <= 0.5 ? 1.0 : 0.0;
    break;
  }
  return u;
}

std::size_t step_count(double dt, double t_end) {
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw ConfigError("dt and t_end must be positive");
  const double ratio = t_end / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("t_end must be a multiple of dt");
  return static_cast<std::size_t>(rounded);
}

SnapshotSet dns_solve(const Mesh1D &mesh, const DnsOptions &opts, const NodalField &ic) {
  if (!(opts.nu > 0.0))
    throw ConfigError("dns_solve: nu must be positive");
  const std::size_t steps = step_count(opts.dt, opts.t_end);
  const auto n = static_cast<Eigen::Index>(mesh.interior_dof_count());
  if (ic.size() != n)
    throw ConfigError("dns_solve: initial condition has wrong length");

  const Tridiagonal mass = mass_bands(mesh);
  const Tridiagonal stiff = stiffness_bands(mesh);

  SnapshotSet set;
  set.Y.resize(n, static_cast<Eigen::Index>(steps + 1));
  set.Y.col(0) = ic;
  set.dt = opts.dt;
  set.t0 = 0.0;
  set.mass = from_bands(mass);
  set.stiffness = from_bands(stiff);

  auto energy = [&](const Eigen::VectorXd &u) { return 0.5 * u.dot(mass.apply(u)); };
  double previous_energy = energy(ic);

  for (std::size_t k = 0; k < steps; ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    const bool first = k == 0;
    const Eigen::VectorXd un = set.Y.col(col);
    const Eigen::VectorXd w = first ? un : Eigen::VectorXd(2.0 * un - set.Y.col(col - 1));
    const double time_coeff = (first ? 1.0 : 1.5) / opts.dt;

    Tridiagonal system = convection_bands(mesh, w);
    system.lower += opts.nu * stiff.lower + time_coeff * mass.lower;
    system.diag += opts.nu * stiff.diag + time_coeff * mass.diag;
    system.upper += opts.nu * stiff.upper + time_coeff * mass.upper;

    const Eigen::VectorXd history =
        first ? Eigen::VectorXd(un) : Eigen::VectorXd(2.0 * un - 0.5 * set.Y.col(col - 1));
    const Eigen::VectorXd rhs = mass.apply(history) / opts.dt;

    Eigen::VectorXd next;
    try {
      next = system.solve(rhs);
    } catch (const NumericalError &e) {
      throw StepError(std::string("DNS linear solve failed (") + e.what() + ")", k + 1);
    }
    if (!next.allFinite())
      throw StepError("DNS produced non-finite values", k + 1);
    if (opts.check_energy) {
      const double e = energy(next);
      if (e > previous_energy * (1.0 + opts.energy_growth_tol) + 1e-300)
        throw StepError("DNS discrete energy increased", k + 1);
      previous_energy = e;
    }
    set.Y.col(col + 1) = next;
  }
  return set;
}

} // namespace cerom
