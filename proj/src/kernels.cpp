#include "cerom/kernels.hpp"

#include <array>

#include "cerom/errors.hpp"

namespace cerom {

Eigen::VectorXd Tensor3::contract(const Eigen::VectorXd &a) const {
  Eigen::VectorXd q(size());
  for (Eigen::Index i = 0; i < size(); ++i)
    q[i] = a.dot(slices[static_cast<std::size_t>(i)] * a);
  return q;
}

Eigen::MatrixXd Tensor3::linearize(const Eigen::VectorXd &w) const {
  Eigen::MatrixXd L(size(), size());
  for (Eigen::Index i = 0; i < size(); ++i)
    L.row(i) = w.transpose() * slices[static_cast<std::size_t>(i)];
  return L;
}

Tensor3 Tensor3::leading(Eigen::Index n) const {
  if (n > size())
    throw ConfigError("Tensor3::leading: requested block larger than tensor");
  Tensor3 out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.slices[static_cast<std::size_t>(i)] = slices[static_cast<std::size_t>(i)].topLeftCorner(n, n);
  return out;
}

Tensor3 &Tensor3::operator+=(const Tensor3 &other) {
  if (other.size() != size())
    throw ConfigError("Tensor3: size mismatch in +=");
  for (std::size_t i = 0; i < slices.size(); ++i)
    slices[i] += other.slices[i];
  return *this;
}

namespace {

constexpr double kGaussOffset = 0.38729833462074168852;
constexpr std::array<double, 3> kXi{0.5 - kGaussOffset, 0.5, 0.5 + kGaussOffset};
constexpr std::array<double, 3> kWeight{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Basis values at full nodes (zero rows for the two Dirichlet nodes).
Eigen::MatrixXd padded_basis(const Mesh1D &mesh, const Eigen::MatrixXd &Phi, Eigen::Index r) {
  const auto n = static_cast<Eigen::Index>(mesh.interior_dof_count());
  if (Phi.rows() != n)
    throw ConfigError("trilinear_tensor: basis rows do not match mesh");
  if (r < 1 || r > Phi.cols())
    throw ConfigError("trilinear_tensor: r out of range");
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n + 2, r);
  P.middleRows(1, n) = Phi.leftCols(r);
  return P;
}

void check_gram_args(const Eigen::MatrixXd &Y, const Eigen::SparseMatrix<double> &M) {
  if (M.rows() != Y.rows() || M.cols() != Y.rows())
    throw ConfigError("snapshot_gram: mass matrix does not match snapshot rows");
}

} // namespace

namespace serial {

Eigen::MatrixXd snapshot_gram(const Eigen::MatrixXd &Y, const Eigen::SparseMatrix<double> &M) {
  check_gram_args(Y, M);
  const Eigen::MatrixXd MY = M * Y;
  const Eigen::Index m = Y.cols();
  Eigen::MatrixXd K(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < Y.rows(); ++k)
        s += Y(k, i) * MY(k, j);
      K(i, j) = s;
      K(j, i) = s;
    }
  return K;
}

Eigen::MatrixXd convection_loads(const Mesh1D &mesh, const Eigen::MatrixXd &U) {
  Eigen::MatrixXd G(U.rows(), U.cols());
  for (Eigen::Index j = 0; j < U.cols(); ++j)
    G.col(j) = convection_load(mesh, U.col(j));
  return G;
}

Tensor3 trilinear_tensor(const Mesh1D &mesh, const Eigen::MatrixXd &Phi, Eigen::Index r) {
  const Eigen::MatrixXd P = padded_basis(mesh, Phi, r);
  Tensor3 B(r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index m = 0; m < r; ++m)
      for (Eigen::Index n = 0; n < r; ++n) {
        double s = 0.0;
        for (std::size_t e = 0; e < mesh.n_cells; ++e) {
          const auto a = static_cast<Eigen::Index>(e);
          const double h = mesh.nodes[e + 1] - mesh.nodes[e];
          const double dn = (P(a + 1, n) - P(a, n)) / h;
          for (std::size_t q = 0; q < 3; ++q) {
            const double pm = P(a, m) * (1.0 - kXi[q]) + P(a + 1, m) * kXi[q];
            const double pi = P(a, i) * (1.0 - kXi[q]) + P(a + 1, i) * kXi[q];
            s += kWeight[q] * h * pm * dn * pi;
          }
        }
        B(i, m, n) = -s;
      }
  return B;
}

} // namespace serial

namespace parallel {

Eigen::MatrixXd snapshot_gram(const Eigen::MatrixXd &Y, const Eigen::SparseMatrix<double> &M) {
  check_gram_args(Y, M);
  const Eigen::Index m = Y.cols();
  Eigen::MatrixXd MY(Y.rows(), m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < m; ++j)
    MY.col(j) = M * Y.col(j);

  Eigen::MatrixXd K(m, m);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      K(i, j) = Y.col(i).dot(MY.col(j));
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = j + 1; i < m; ++i)
      K(i, j) = K(j, i);
  return K;
}

Eigen::MatrixXd convection_loads(const Mesh1D &mesh, const Eigen::MatrixXd &U) {
  Eigen::MatrixXd G(U.rows(), U.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < U.cols(); ++j)
    G.col(j) = convection_load(mesh, U.col(j));
  return G;
}

Tensor3 trilinear_tensor(const Mesh1D &mesh, const Eigen::MatrixXd &Phi, Eigen::Index r) {
  const Eigen::MatrixXd P = padded_basis(mesh, Phi, r);
  const auto cells = static_cast<Eigen::Index>(mesh.n_cells);

  // Per element and Gauss point: basis values (r) and the element derivative (r).
  Tensor3 B(r);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < r; ++i) {
    Eigen::MatrixXd &slice = B.slices[static_cast<std::size_t>(i)];
    Eigen::VectorXd v(r);
    for (Eigen::Index e = 0; e < cells; ++e) {
      const double h = mesh.nodes[static_cast<std::size_t>(e + 1)] - mesh.nodes[static_cast<std::size_t>(e)];
      const Eigen::VectorXd d = (P.row(e + 1) - P.row(e)).transpose() / h;
      for (std::size_t q = 0; q < 3; ++q) {
        v = (P.row(e) * (1.0 - kXi[q]) + P.row(e + 1) * kXi[q]).transpose();
        slice.noalias() -= (kWeight[q] * h * v[i]) * v * d.transpose();
      }
    }
  }
  return B;
}

} // namespace parallel

} // namespace cerom
