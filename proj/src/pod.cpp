#include "cerom/pod.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "cerom/errors.hpp"
#include "cerom/kernels.hpp"

namespace cerom {

namespace {

constexpr double kNegativeClamp = 1e-12;
// Pinned modes below this relative energy are eigen-solver round-off.
constexpr double kPinnedFloor = 1e-14;

void mgs_mass(Eigen::MatrixXd &Phi, const Eigen::SparseMatrix<double> &mass) {
  for (Eigen::Index j = 0; j < Phi.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < j; ++k) {
        const Eigen::VectorXd Mv = mass * Phi.col(j);
        Phi.col(j) -= Phi.col(k).dot(Mv) * Phi.col(k);
      }
    }
    const double norm2 = Phi.col(j).dot(mass * Phi.col(j));
    if (!(norm2 > 0.0))
      throw NumericalError("POD: mode " + std::to_string(j + 1) + " lost its norm during re-orthonormalisation");
    Phi.col(j) /= std::sqrt(norm2);
  }
}

void fix_signs(Eigen::MatrixXd &Phi) {
  for (Eigen::Index j = 0; j < Phi.cols(); ++j) {
    Eigen::Index at = 0;
    Phi.col(j).cwiseAbs().maxCoeff(&at);
    if (Phi(at, j) < 0.0)
      Phi.col(j) = -Phi.col(j);
  }
}

} // namespace

PodBasis compute_pod(const SnapshotSet &set, const PodOptions &opts) {
  set.validate();
  if (!(opts.rank_tol > 0.0 && opts.rank_tol < 1.0))
    throw ConfigError("rank_tol must lie in (0, 1)");
  if (opts.pinned_d < 0)
    throw ConfigError("pinned d must be non-negative");

  const Eigen::MatrixXd K = parallel::snapshot_gram(set.Y, set.mass);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
  if (eig.info() != Eigen::Success)
    throw NumericalError("POD: snapshot eigenproblem did not converge");

  // Eigen returns ascending order.
  const Eigen::Index m = K.rows();
  Eigen::VectorXd lam = eig.eigenvalues().reverse();
  Eigen::MatrixXd W = eig.eigenvectors().rowwise().reverse();
  const double lead = lam[0];
  if (!(lead > 0.0))
    throw NumericalError("zero-energy snapshots");
  for (Eigen::Index j = 0; j < m; ++j) {
    if (lam[j] < 0.0) {
      if (-lam[j] > kNegativeClamp * lead)
        throw NumericalError("POD: eigenvalue " + std::to_string(j + 1) + " is significantly negative");
      lam[j] = 0.0;
    }
  }

  Eigen::Index d = 0;
  if (opts.pinned_d > 0) {
    d = opts.pinned_d;
    if (d > m || !(lam[d - 1] > kPinnedFloor * lead))
      throw ConfigError("pinned d=" + std::to_string(d) + " exceeds the numerical rank of the snapshots");
  } else {
    while (d < m && lam[d] / lead > opts.rank_tol)
      ++d;
  }

  PodBasis basis;
  basis.d = d;
  basis.spectrum = lam;
  basis.lambda = lam.head(d);
  basis.Phi = set.Y * W.leftCols(d);
  for (Eigen::Index j = 0; j < d; ++j)
    basis.Phi.col(j) /= std::sqrt(lam[j]);
  mgs_mass(basis.Phi, set.mass);
  fix_signs(basis.Phi);

  basis.M_full = basis.Phi.transpose() * (set.mass * basis.Phi);
  basis.S_full = basis.Phi.transpose() * (set.stiffness * basis.Phi);
  basis.M_full = 0.5 * (basis.M_full + basis.M_full.transpose()).eval();
  basis.S_full = 0.5 * (basis.S_full + basis.S_full.transpose()).eval();
  return basis;
}

ReducedTrajectory reduce_trajectory(const SnapshotSet &set, const PodBasis &basis) {
  if (set.Y.rows() != basis.Phi.rows())
    throw ConfigError("reduce_trajectory: snapshot rows do not match basis");
  ReducedTrajectory traj;
  traj.coeffs = (basis.Phi.transpose() * (set.mass * set.Y)).transpose();
  traj.dt = set.dt;
  traj.t0 = set.t0;
  return traj;
}

ReducedBlocks reduced_blocks(const PodBasis &basis, Eigen::Index r) {
  if (r < 1 || r > basis.d)
    throw ConfigError("r=" + std::to_string(r) + " out of range [1, " + std::to_string(basis.d) + "]");
  ReducedBlocks b;
  b.M_r = basis.M_full.topLeftCorner(r, r);
  b.S_r = basis.S_full.topLeftCorner(r, r);
  b.M_rd = basis.M_full.topRows(r);
  b.S_rd = basis.S_full.topRows(r);
  return b;
}

double orthonormality_defect(const PodBasis &basis, const Eigen::SparseMatrix<double> &mass) {
  const Eigen::MatrixXd G = basis.Phi.transpose() * (mass * basis.Phi);
  return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

} // namespace cerom
