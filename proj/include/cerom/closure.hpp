#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cerom/fe1d.hpp"
#include "cerom/filters_ce.hpp"
#include "cerom/kernels.hpp"
#include "cerom/pod.hpp"

namespace cerom {

/// Galerkin operators: da/dt = A a + B(a, a), with B(a,a)_i = sum_mn B(i,m,n) a_m a_n.
struct RomOperators {
  Eigen::MatrixXd A;
  Tensor3 B;
  double nu = 0.0;
  Eigen::Index r() const { return A.rows(); }
};

/// A = -nu S_r (M_r = I), B(i,m,n) = -(phi_m phi_n', phi_i).
RomOperators grom_operators(const PodBasis &basis, Eigen::Index r, double nu, const Mesh1D &mesh);

enum class FitState { truncated, filtered };
FitState parse_fit_state(std::string_view name);

/// Per-snapshot rows (M x r).
struct ClosureTargets {
  Eigen::MatrixXd tau;   // (u_r u_r', phi_i) - (overline(u_d u_d'), phi_i)
  Eigen::MatrixXd e_ce;  // -nu M_r (b - c)
  Eigen::MatrixXd state; // ansatz features a_r(t_j)
};

/// tau_i = (u_r u_r', phi_i) - (overline(u_d u_d'), phi_i), where u_r is the
/// filtered field. With this sign the exact reduced dynamics read
/// da/dt = A a + B(a,a) + tau + e_ce. e_ce is zero when with_ce is false.
ClosureTargets correction_targets(const ReducedTrajectory &traj, const PodBasis &basis,
                                  const FilterOperator &filter, double nu, const Mesh1D &mesh,
                                  FitState state = FitState::truncated, bool with_ce = true);

struct FitOptions {
  /// Singular values below rcond * sigma_max of the scaled design matrix are dropped.
  double rcond = 1e-6;
  bool quadratic = true;
};

struct FittedOperators {
  Eigen::MatrixXd A_tilde;
  Tensor3 B_tilde; // every slice symmetric
  double training_residual = 0.0; // Frobenius norm of target - ansatz over the training set
};

/// Least-squares fit of targets(j,:) ~ A_tilde a_j + B_tilde(a_j, a_j).
FittedOperators fit_ansatz(const Eigen::MatrixXd &targets, const Eigen::MatrixXd &a_r,
                           const FitOptions &opts = {});

/// Evaluates the fitted ansatz on every row of a_r.
Eigen::MatrixXd evaluate_ansatz(const FittedOperators &fit, const Eigen::MatrixXd &a_r);

enum class RomVariant { grom, ddc, ice_ddc, ce_ddc };
RomVariant parse_variant(std::string_view name);
std::string to_string(RomVariant v);

/// Sampled forcing, row j at t0 + j*dt.
struct ForcingSeries {
  Eigen::MatrixXd samples; // M x r
  double dt = 0.0;
  double t0 = 0.0;
  double t_last() const { return t0 + static_cast<double>(samples.rows() - 1) * dt; }
  /// Piecewise-linear interpolation, clamped to the sampled window.
  Eigen::VectorXd at(double t) const;
};

struct RomModel {
  RomVariant variant = RomVariant::grom;
  RomOperators ops;
  std::optional<FittedOperators> fitted;
  std::optional<ForcingSeries> forcing;
  std::vector<std::string> warnings;

  Eigen::Index r() const { return ops.r(); }
  /// A + A_tilde
  Eigen::MatrixXd linear() const;
  /// B + B_tilde
  Tensor3 quadratic() const;
};

RomModel assemble_model(RomVariant variant, RomOperators ops, std::optional<FittedOperators> fitted = {},
                        std::optional<ForcingSeries> forcing = {});

} // namespace cerom
