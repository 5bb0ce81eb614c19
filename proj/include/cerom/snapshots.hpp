#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cerom {

/// Snapshot matrix (one FE coefficient vector per column) plus the FE mass and
/// stiffness matrices it lives with.
struct SnapshotSet {
  Eigen::MatrixXd Y;
  Eigen::SparseMatrix<double> mass;
  Eigen::SparseMatrix<double> stiffness;
  double dt = 0.0;
  double t0 = 0.0;
  std::vector<std::string> labels;

  Eigen::Index dof_count() const { return Y.rows(); }
  Eigen::Index snapshot_count() const { return Y.cols(); }
  double time(Eigen::Index j) const { return t0 + static_cast<double>(j) * dt; }

  /// Throws ConfigError on dimension/count violations and SymmetryError on
  /// asymmetric matrices (relative tolerance `sym_tol`).
  void validate(double sym_tol = 1e-12) const;
};

inline constexpr char kSnapshotMagic[4] = {'R', 'O', 'M', 'S'};
inline constexpr unsigned long long kSnapshotVersion = 1;

/// Writes the "ROMS" v1 container (little-endian):
/// magic | version u64 | N_h u64 | M u64 | dt f64 | t0 f64 | nnz_mass u64 |
/// nnz_stiff u64 | mass triplets (u64,u64,f64) | stiffness triplets | Y column-major.
void save_snapshots(const SnapshotSet &set, const std::filesystem::path &path);

SnapshotSet load_snapshots(const std::filesystem::path &path);

/// Exact byte size of the container for a given set.
std::uintmax_t snapshot_file_size(const SnapshotSet &set);

} // namespace cerom
