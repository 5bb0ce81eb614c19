#include "cerom/filters_ce.hpp"

#include <cmath>

#include "cerom/errors.hpp"

namespace cerom {

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "differential" || name == "df")
    return FilterKind::differential;
  if (name == "projection")
    return FilterKind::projection;
  throw ConfigError("unknown filter kind '" + std::string(name) + "'");
}

std::string to_string(FilterKind kind) {
  return kind == FilterKind::differential ? "differential" : "projection";
}

FilterOperator::FilterOperator(ReducedBlocks blocks, FilterSpec spec)
    : blocks_(std::move(blocks)), spec_(spec) {
  if (!(spec_.delta >= 0.0) || !std::isfinite(spec_.delta))
    throw ConfigError("filter delta must be finite and non-negative");
  mass_llt_.compute(blocks_.M_r);
  if (mass_llt_.info() != Eigen::Success)
    throw NumericalError("filter: reduced mass matrix is not positive definite");
  if (spec_.kind == FilterKind::differential) {
    filter_llt_.compute(blocks_.M_r + spec_.delta * spec_.delta * blocks_.S_r);
    if (filter_llt_.info() != Eigen::Success)
      throw NumericalError("filter: M_r + delta^2 S_r is not positive definite");
  }
}

Eigen::VectorXd FilterOperator::solve_mass(const Eigen::VectorXd &rhs) const { return mass_llt_.solve(rhs); }

Eigen::VectorXd FilterOperator::solve_filter(const Eigen::VectorXd &rhs) const {
  return spec_.kind == FilterKind::differential ? filter_llt_.solve(rhs) : mass_llt_.solve(rhs);
}

Eigen::VectorXd FilterOperator::apply(const Eigen::VectorXd &a_d) const {
  if (a_d.size() != blocks_.d())
    throw ConfigError("filter: a_d has wrong length");
  return solve_filter(blocks_.M_rd * a_d);
}

Eigen::MatrixXd FilterOperator::apply_rows(const Eigen::MatrixXd &A_d) const {
  if (A_d.cols() != blocks_.d())
    throw ConfigError("filter: coefficient rows have wrong length");
  const Eigen::MatrixXd rhs = blocks_.M_rd * A_d.transpose();
  const Eigen::MatrixXd out =
      spec_.kind == FilterKind::differential ? filter_llt_.solve(rhs) : mass_llt_.solve(rhs);
  return out.transpose();
}

Eigen::VectorXd FilterOperator::filter_load(const Eigen::VectorXd &f_r) const {
  return blocks_.M_r * solve_filter(f_r);
}

CeSample FilterOperator::ce(const Eigen::VectorXd &a_d, double t) const {
  if (a_d.size() != blocks_.d())
    throw ConfigError("ce: a_d has wrong length");
  CeSample s;
  s.t = t;
  s.b = -solve_mass(blocks_.S_r * solve_filter(blocks_.M_rd * a_d));
  s.c = -solve_filter(blocks_.S_rd * a_d);
  return s;
}

Eigen::VectorXd apply_filter(const Eigen::VectorXd &a_d, Eigen::Index r, const FilterSpec &spec,
                             const PodBasis &basis) {
  return FilterOperator(reduced_blocks(basis, r), spec).apply(a_d);
}

CeSample ce_coefficients(const Eigen::VectorXd &a_d, Eigen::Index r, const FilterSpec &spec,
                         const PodBasis &basis) {
  return FilterOperator(reduced_blocks(basis, r), spec).ce(a_d);
}

std::vector<CeSample> ce_trajectory(const ReducedTrajectory &traj, const FilterOperator &filter,
                                    bool include_t0) {
  std::vector<CeSample> out;
  const Eigen::Index first = include_t0 ? 0 : 1;
  out.reserve(static_cast<std::size_t>(std::max<Eigen::Index>(0, traj.count() - first)));
  for (Eigen::Index j = first; j < traj.count(); ++j)
    out.push_back(filter.ce(traj.coeffs.row(j).transpose(), traj.t0 + static_cast<double>(j) * traj.dt));
  return out;
}

double time_average(const Eigen::MatrixXd &E, const Eigen::MatrixXd &M_r, double dt, double T) {
  if (E.rows() < 1)
    throw ConfigError("time average over an empty sample sequence");
  if (E.cols() != M_r.rows() || M_r.rows() != M_r.cols())
    throw ConfigError("time average: dimension mismatch");
  if (!(dt > 0.0) || !(T > 0.0))
    throw ConfigError("time average: dt and T must be positive");
  const double expected = static_cast<double>(E.rows()) * dt;
  if (std::abs(T - expected) > 1e-9 * expected)
    throw ConfigError("time average: T must equal sample count times dt");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < E.rows(); ++j) {
    const Eigen::VectorXd e = E.row(j).transpose();
    sum += e.dot(M_r * e);
  }
  return std::sqrt(std::max(0.0, sum) * dt / T);
}

double avg_ce_norm(std::span<const CeSample> samples, const Eigen::MatrixXd &M_r, double dt, double T) {
  if (samples.empty())
    throw ConfigError("avg_ce_norm: no samples");
  Eigen::MatrixXd E(static_cast<Eigen::Index>(samples.size()), M_r.rows());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (samples[j].b.size() != M_r.rows() || samples[j].c.size() != M_r.rows())
      throw ConfigError("avg_ce_norm: sample length does not match M_r");
    E.row(static_cast<Eigen::Index>(j)) = (samples[j].b - samples[j].c).transpose();
  }
  return time_average(E, M_r, dt, T);
}

} // namespace cerom
