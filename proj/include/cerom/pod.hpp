#pragma once

#include <Eigen/Dense>

#include "cerom/snapshots.hpp"

namespace cerom {

struct PodOptions {
  /// Keep modes with lambda_j / lambda_1 > rank_tol.
  double rank_tol = 1e-12;
  /// If > 0, use exactly this many modes instead of the tolerance rule.
  Eigen::Index pinned_d = 0;
};

/// POD basis in the M_h inner product. Phi columns are FE coefficient vectors.
struct PodBasis {
  Eigen::MatrixXd Phi;
  Eigen::VectorXd lambda;   // d retained eigenvalues, descending
  Eigen::VectorXd spectrum; // every snapshot eigenvalue after clamping
  Eigen::Index d = 0;
  Eigen::MatrixXd M_full; // Phi^T M_h Phi
  Eigen::MatrixXd S_full; // Phi^T S_h Phi
};

/// Leading sub-blocks for a given r.
struct ReducedBlocks {
  Eigen::MatrixXd M_r, S_r;   // r x r
  Eigen::MatrixXd M_rd, S_rd; // r x d
  Eigen::Index r() const { return M_r.rows(); }
  Eigen::Index d() const { return M_rd.cols(); }
};

/// Time history of POD coefficients, one row per snapshot.
struct ReducedTrajectory {
  Eigen::MatrixXd coeffs; // M x d
  double dt = 0.0;
  double t0 = 0.0;
  Eigen::Index count() const { return coeffs.rows(); }
};

/// Method of snapshots: eigen-decompose Y^T M_h Y, lift, re-orthonormalise
/// (two-pass modified Gram-Schmidt in M_h), and fix signs so that the
/// largest-magnitude entry of every mode is positive.
PodBasis compute_pod(const SnapshotSet &set, const PodOptions &opts = {});

ReducedTrajectory reduce_trajectory(const SnapshotSet &set, const PodBasis &basis);

ReducedBlocks reduced_blocks(const PodBasis &basis, Eigen::Index r);

/// max |Phi^T M_h Phi - I|
double orthonormality_defect(const PodBasis &basis, const Eigen::SparseMatrix<double> &mass);

} // namespace cerom
