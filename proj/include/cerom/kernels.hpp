#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference and an
// OpenMP version; tests check they agree, bench/ compares their speed.

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cerom/fe1d.hpp"

namespace cerom {

/// Third-order tensor stored as slices: T(i, m, n) = slices[i](m, n).
struct Tensor3 {
  std::vector<Eigen::MatrixXd> slices;

  Tensor3() = default;
  explicit Tensor3(Eigen::Index n)
      : slices(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n)) {}

  Eigen::Index size() const { return static_cast<Eigen::Index>(slices.size()); }
  double &operator()(Eigen::Index i, Eigen::Index m, Eigen::Index n) {
    return slices[static_cast<std::size_t>(i)](m, n);
  }
  double operator()(Eigen::Index i, Eigen::Index m, Eigen::Index n) const {
    return slices[static_cast<std::size_t>(i)](m, n);
  }

  /// q_i = sum_{mn} T(i,m,n) a_m a_n
  Eigen::VectorXd contract(const Eigen::VectorXd &a) const;
  /// L(i,n) = sum_m T(i,m,n) w_m, so that contract(a) = L(a) a.
  Eigen::MatrixXd linearize(const Eigen::VectorXd &w) const;
  /// Leading n x n x n block.
  Tensor3 leading(Eigen::Index n) const;

  Tensor3 &operator+=(const Tensor3 &other);
};

namespace serial {

/// K = Y^T M Y
Eigen::MatrixXd snapshot_gram(const Eigen::MatrixXd &Y, const Eigen::SparseMatrix<double> &M);

/// Column j of the result is convection_load(mesh, U.col(j)).
Eigen::MatrixXd convection_loads(const Mesh1D &mesh, const Eigen::MatrixXd &U);

/// B(i,m,n) = -(phi_m phi_n', phi_i) for the first r columns of Phi.
Tensor3 trilinear_tensor(const Mesh1D &mesh, const Eigen::MatrixXd &Phi, Eigen::Index r);

} // namespace serial

namespace parallel {

Eigen::MatrixXd snapshot_gram(const Eigen::MatrixXd &Y, const Eigen::SparseMatrix<double> &M);
Eigen::MatrixXd convection_loads(const Mesh1D &mesh, const Eigen::MatrixXd &U);
Tensor3 trilinear_tensor(const Mesh1D &mesh, const Eigen::MatrixXd &Phi, Eigen::Index r);

} // namespace parallel

} // namespace cerom
