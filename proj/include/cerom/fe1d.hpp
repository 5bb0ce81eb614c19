#pragma once

// Linear finite elements for the 1D viscous Burgers equation on [0,1] with
// homogeneous Dirichlet conditions, and the BDF2 DNS that produces snapshots.

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cerom/snapshots.hpp"

namespace cerom {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Uniform grid on [0,1]. Boundary nodes are kept in `nodes`; only interior
/// nodes carry degrees of freedom.
struct Mesh1D {
  std::size_t n_cells = 0;
  std::vector<double> nodes;

  double h() const { return 1.0 / static_cast<double>(n_cells); }
  std::size_t interior_dof_count() const { return n_cells - 1; }
  /// Coordinate of interior DOF `k` (0-based).
  double dof_coordinate(std::size_t k) const { return nodes[k + 1]; }
};

Mesh1D build_mesh(std::size_t n_cells);

struct FeMatrices {
  SparseMatrix mass;
  SparseMatrix stiffness;
};

FeMatrices assemble_matrices(const Mesh1D &mesh);

/// Values at interior nodes.
using NodalField = Eigen::VectorXd;

enum class InitialCondition { smooth, step };

InitialCondition parse_initial_condition(std::string_view name);

/// Nodal interpolant of u0(x) = 2 nu beta pi sin(pi x) / (alpha + beta cos(pi x))
/// with alpha=5, beta=4 (smooth), or the indicator of (0, 1/2] (step).
NodalField initial_condition(InitialCondition kind, double nu, const Mesh1D &mesh);

/// Tridiagonal system stored by bands; lower[0] and upper[n-1] are unused.
struct Tridiagonal {
  Eigen::VectorXd lower, diag, upper;

  explicit Tridiagonal(std::size_t n = 0)
      : lower(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))),
        diag(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))),
        upper(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))) {}

  Eigen::Index size() const { return diag.size(); }
  Eigen::VectorXd apply(const Eigen::VectorXd &x) const;
  /// Thomas algorithm. Throws NumericalError on a zero pivot.
  Eigen::VectorXd solve(const Eigen::VectorXd &rhs) const;
};

Tridiagonal mass_bands(const Mesh1D &mesh);
Tridiagonal stiffness_bands(const Mesh1D &mesh);

/// Matrix of the linearised convection form C(w)_{ij} = (w phi_j', phi_i)
/// over interior DOFs, integrated exactly with 3-point Gauss per element.
Tridiagonal convection_bands(const Mesh1D &mesh, const NodalField &w);

/// Load vector g_k = (u u', phi_k) for the Burgers nonlinearity.
Eigen::VectorXd convection_load(const Mesh1D &mesh, const NodalField &u);

struct DnsOptions {
  double nu = 0.1;
  double dt = 1e-3;
  double t_end = 1.0;
  /// Throw if the discrete energy 1/2 u^T M u grows between steps. Defaults
  /// on in debug builds.
#ifdef NDEBUG
  bool check_energy = false;
#else
  bool check_energy = true;
#endif
  double energy_growth_tol = 1e-12;
};

/// Linearised BDF2 (backward Euler first step) with convection velocity
/// extrapolated as 2u^n - u^{n-1}. Returns one snapshot per step, t=0 included.
SnapshotSet dns_solve(const Mesh1D &mesh, const DnsOptions &opts, const NodalField &ic);

/// Number of steps `t_end / dt`, rejecting non-integral ratios.
std::size_t step_count(double dt, double t_end);

} // namespace cerom
