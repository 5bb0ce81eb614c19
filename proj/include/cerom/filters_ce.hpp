#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "cerom/pod.hpp"

namespace cerom {

enum class FilterKind { differential, projection };

FilterKind parse_filter_kind(std::string_view name);
std::string to_string(FilterKind kind);

/// delta is ignored for the projection filter. A differential filter with
/// delta = 0 is the projection filter.
struct FilterSpec {
  FilterKind kind = FilterKind::projection;
  double delta = 0.0;
};

/// b: coefficients of the Laplacian of the filtered field; c: coefficients of
/// the filtered Laplacian. E_Delta = sum_j (b - c)_j phi_j.
struct CeSample {
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double t = 0.0;
};

/// Factorised r-level filter. Holds Cholesky factors of M_r and M_r + delta^2 S_r.
class FilterOperator {
public:
  FilterOperator(ReducedBlocks blocks, FilterSpec spec);

  const ReducedBlocks &blocks() const { return blocks_; }
  const FilterSpec &spec() const { return spec_; }
  Eigen::Index r() const { return blocks_.r(); }

  /// Filtered coefficients a_r of the d-space field with coefficients a_d.
  Eigen::VectorXd apply(const Eigen::VectorXd &a_d) const;
  /// Row-wise apply: M x d -> M x r.
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd &A_d) const;
  /// Given the loads f_i = (f, phi_i), i <= r, returns (overline f, phi_i).
  Eigen::VectorXd filter_load(const Eigen::VectorXd &f_r) const;

  CeSample ce(const Eigen::VectorXd &a_d, double t = 0.0) const;

private:
  Eigen::VectorXd solve_filter(const Eigen::VectorXd &rhs) const;
  Eigen::VectorXd solve_mass(const Eigen::VectorXd &rhs) const;

  ReducedBlocks blocks_;
  FilterSpec spec_;
  Eigen::LLT<Eigen::MatrixXd> mass_llt_;
  Eigen::LLT<Eigen::MatrixXd> filter_llt_;
};

Eigen::VectorXd apply_filter(const Eigen::VectorXd &a_d, Eigen::Index r, const FilterSpec &spec,
                             const PodBasis &basis);

CeSample ce_coefficients(const Eigen::VectorXd &a_d, Eigen::Index r, const FilterSpec &spec,
                         const PodBasis &basis);

/// CE samples at every row of the trajectory (row 0 dropped if !include_t0).
std::vector<CeSample> ce_trajectory(const ReducedTrajectory &traj, const FilterOperator &filter,
                                    bool include_t0 = true);

/// sqrt( sum_j e_j^T M_r e_j dt / T ), e_j = row j of E. T must equal rows*dt.
double time_average(const Eigen::MatrixXd &E, const Eigen::MatrixXd &M_r, double dt, double T);

/// time_average of (b - c) over the samples.
double avg_ce_norm(std::span<const CeSample> samples, const Eigen::MatrixXd &M_r, double dt, double T);

} // namespace cerom
