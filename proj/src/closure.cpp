#include "cerom/closure.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "cerom/errors.hpp"

namespace cerom {

RomOperators grom_operators(const PodBasis &basis, Eigen::Index r, double nu, const Mesh1D &mesh) {
  const ReducedBlocks blocks = reduced_blocks(basis, r);
  if (!(nu >= 0.0))
    throw ConfigError("grom_operators: nu must be non-negative");
  RomOperators ops;
  ops.nu = nu;
  ops.A = -nu * blocks.S_r;
  ops.B = parallel::trilinear_tensor(mesh, basis.Phi, r);
  return ops;
}

FitState parse_fit_state(std::string_view name) {
  if (name == "truncated")
    return FitState::truncated;
  if (name == "filtered")
    return FitState::filtered;
  throw ConfigError("unknown fit state '" + std::string(name) + "'");
}

ClosureTargets correction_targets(const ReducedTrajectory &traj, const PodBasis &basis,
                                  const FilterOperator &filter, double nu, const Mesh1D &mesh,
                                  FitState state, bool with_ce) {
  const Eigen::Index r = filter.r();
  const Eigen::Index d = basis.d;
  if (traj.coeffs.cols() != d || filter.blocks().d() != d)
    throw ConfigError("correction_targets: trajectory, basis and filter disagree on d");
  if (basis.Phi.rows() != static_cast<Eigen::Index>(mesh.interior_dof_count()))
    throw ConfigError("correction_targets: basis does not live on this mesh");

  const Eigen::MatrixXd &A_d = traj.coeffs;
  const Eigen::MatrixXd A_f = filter.apply_rows(A_d);
  const auto Phi_r = basis.Phi.leftCols(r);

  const Eigen::MatrixXd loads_d = Phi_r.transpose() * parallel::convection_loads(mesh, basis.Phi * A_d.transpose());
  const Eigen::MatrixXd loads_r = Phi_r.transpose() * parallel::convection_loads(mesh, Phi_r * A_f.transpose());

  ClosureTargets out;
  const Eigen::Index m = traj.count();
  out.tau.resize(m, r);
  out.e_ce = Eigen::MatrixXd::Zero(m, r);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.tau.row(j) = (loads_r.col(j) - filter.filter_load(loads_d.col(j))).transpose();
    if (with_ce) {
      const CeSample s = filter.ce(A_d.row(j).transpose());
      out.e_ce.row(j) = (-nu * (filter.blocks().M_r * (s.b - s.c))).transpose();
    }
  }
  out.state = state == FitState::truncated ? Eigen::MatrixXd(A_d.leftCols(r)) : A_f;
  return out;
}

namespace {

Eigen::Index feature_count(Eigen::Index r, bool quadratic) {
  return r + (quadratic ? r * (r + 1) / 2 : 0);
}

Eigen::MatrixXd features(const Eigen::MatrixXd &a, bool quadratic, double scale) {
  const Eigen::Index r = a.cols();
  Eigen::MatrixXd F(a.rows(), feature_count(r, quadratic));
  F.leftCols(r) = a / scale;
  if (quadratic) {
    const double s2 = scale * scale;
    Eigen::Index k = r;
    for (Eigen::Index m = 0; m < r; ++m)
      for (Eigen::Index n = m; n < r; ++n, ++k)
        F.col(k) = a.col(m).cwiseProduct(a.col(n)) / s2;
  }
  return F;
}

} // namespace

FittedOperators fit_ansatz(const Eigen::MatrixXd &targets, const Eigen::MatrixXd &a_r, const FitOptions &opts) {
  if (targets.rows() != a_r.rows() || targets.cols() != a_r.cols())
    throw ConfigError("fit_ansatz: targets and states must both be M x r");
  if (a_r.rows() < 1)
    throw ConfigError("fit_ansatz: no training samples");
  if (!(opts.rcond > 0.0 && opts.rcond < 1.0))
    throw ConfigError("fit_ansatz: rcond must lie in (0, 1)");

  const Eigen::Index r = a_r.cols();
  double scale = a_r.rowwise().norm().maxCoeff();
  if (!(scale > 0.0))
    scale = 1.0;

  const Eigen::MatrixXd F = features(a_r, opts.quadratic, scale);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(F, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd &sigma = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  const double cutoff = sigma.size() > 0 ? opts.rcond * sigma[0] : 0.0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma[k] > cutoff)
      inv[k] = 1.0 / sigma[k];
  const Eigen::MatrixXd X = svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * targets);

  FittedOperators fit;
  fit.A_tilde = X.topRows(r).transpose() / scale;
  fit.B_tilde = Tensor3(r);
  if (opts.quadratic) {
    const double s2 = scale * scale;
    Eigen::Index k = r;
    for (Eigen::Index m = 0; m < r; ++m)
      for (Eigen::Index n = m; n < r; ++n, ++k)
        for (Eigen::Index i = 0; i < r; ++i) {
          const double c = X(k, i) / s2;
          if (m == n) {
            fit.B_tilde(i, m, m) = c;
          } else {
            fit.B_tilde(i, m, n) = 0.5 * c;
            fit.B_tilde(i, n, m) = 0.5 * c;
          }
        }
  }
  fit.training_residual = (targets - evaluate_ansatz(fit, a_r)).norm();
  return fit;
}

Eigen::MatrixXd evaluate_ansatz(const FittedOperators &fit, const Eigen::MatrixXd &a_r) {
  Eigen::MatrixXd out(a_r.rows(), a_r.cols());
  for (Eigen::Index j = 0; j < a_r.rows(); ++j) {
    const Eigen::VectorXd a = a_r.row(j).transpose();
    out.row(j) = (fit.A_tilde * a + fit.B_tilde.contract(a)).transpose();
  }
  return out;
}

RomVariant parse_variant(std::string_view name) {
  if (name == "grom")
    return RomVariant::grom;
  if (name == "ddc")
    return RomVariant::ddc;
  if (name == "ice_ddc")
    return RomVariant::ice_ddc;
  if (name == "ce_ddc")
    return RomVariant::ce_ddc;
  throw ConfigError("unknown ROM variant '" + std::string(name) + "'");
}

std::string to_string(RomVariant v) {
  switch (v) {
  case RomVariant::grom:
    return "grom";
  case RomVariant::ddc:
    return "ddc";
  case RomVariant::ice_ddc:
    return "ice_ddc";
  case RomVariant::ce_ddc:
    return "ce_ddc";
  }
  return "?";
}

Eigen::VectorXd ForcingSeries::at(double t) const {
  const Eigen::Index m = samples.rows();
  if (m == 1)
    return samples.row(0).transpose();
  double u = (t - t0) / dt;
  u = std::clamp(u, 0.0, static_cast<double>(m - 1));
  const auto k = std::min(static_cast<Eigen::Index>(std::floor(u)), m - 2);
  const double w = u - static_cast<double>(k);
  return ((1.0 - w) * samples.row(k) + w * samples.row(k + 1)).transpose();
}

Eigen::MatrixXd RomModel::linear() const {
  return fitted ? Eigen::MatrixXd(ops.A + fitted->A_tilde) : ops.A;
}

Tensor3 RomModel::quadratic() const {
  Tensor3 q = ops.B;
  if (fitted)
    q += fitted->B_tilde;
  return q;
}

RomModel assemble_model(RomVariant variant, RomOperators ops, std::optional<FittedOperators> fitted,
                        std::optional<ForcingSeries> forcing) {
  RomModel model;
  model.variant = variant;
  const Eigen::Index r = ops.r();
  if (ops.B.size() != r)
    throw ConfigError("assemble_model: A and B sizes differ");
  model.ops = std::move(ops);

  const bool wants_fit = variant != RomVariant::grom;
  const bool wants_forcing = variant == RomVariant::ice_ddc;
  if (wants_fit && !fitted)
    throw ConfigError(to_string(variant) + " requires fitted operators");
  if (wants_forcing && !forcing)
    throw ConfigError(to_string(variant) + " requires a CE forcing series");
  if (!wants_fit && fitted)
    model.warnings.push_back("fitted operators ignored for " + to_string(variant));
  if (!wants_forcing && forcing)
    model.warnings.push_back("CE forcing ignored for " + to_string(variant));

  if (wants_fit) {
    if (fitted->A_tilde.rows() != r || fitted->B_tilde.size() != r)
      throw ConfigError("assemble_model: fitted operator size does not match r");
    model.fitted = std::move(fitted);
  }
  if (wants_forcing) {
    if (forcing->samples.cols() != r || forcing->samples.rows() < 1 || !(forcing->dt > 0.0))
      throw ConfigError("assemble_model: malformed CE forcing series");
    model.forcing = std::move(forcing);
  }
  return model;
}

} // namespace cerom
