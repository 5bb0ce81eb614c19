#include "cerom/rom_sim.hpp"

#include <cmath>

#include <Eigen/LU>

#include "cerom/errors.hpp"

namespace cerom {

IntegratorKind parse_integrator(std::string_view name) {
  if (name == "bdf2")
    return IntegratorKind::bdf2;
  if (name == "rk4")
    return IntegratorKind::rk4;
  throw ConfigError("unknown integrator '" + std::string(name) + "'");
}

Eigen::VectorXd rom_rhs(const RomModel &model, const Eigen::MatrixXd &A, const Tensor3 &B,
                        const Eigen::VectorXd &a, double t) {
  Eigen::VectorXd f = A * a + B.contract(a);
  if (model.forcing)
    f += model.forcing->at(t);
  return f;
}

namespace {

void check_state(const Eigen::VectorXd &a, double blowup, std::size_t step) {
  if (!a.allFinite() || a.cwiseAbs().maxCoeff() > blowup)
    throw StepError("ROM instability", step);
}

Eigen::VectorXd forcing_at(const RomModel &model, double t, Eigen::Index r) {
  return model.forcing ? model.forcing->at(t) : Eigen::VectorXd::Zero(r);
}

} // namespace

RomTrajectory integrate(const RomModel &model, const Eigen::VectorXd &a0, double dt, double t_end,
                        const IntegrateOptions &opts) {
  const Eigen::Index r = model.r();
  if (a0.size() != r)
    throw ConfigError("integrate: a0 has wrong length");
  const std::size_t steps = step_count(dt, t_end);
  if (model.forcing && model.forcing->t_last() < opts.t0 + t_end - 1e-9 * t_end)
    throw ConfigError("integrate: CE forcing does not cover the integration window");

  const Eigen::MatrixXd A = model.linear();
  const Tensor3 B = model.quadratic();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(r, r);

  RomTrajectory traj;
  traj.dt = dt;
  traj.t0 = opts.t0;
  traj.coeffs.resize(static_cast<Eigen::Index>(steps + 1), r);
  traj.coeffs.row(0) = a0.transpose();
  check_state(a0, opts.blowup, 0);

  Eigen::VectorXd prev = a0, cur = a0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = opts.t0 + static_cast<double>(k) * dt;
    const double t_next = opts.t0 + static_cast<double>(k + 1) * dt;
    Eigen::VectorXd next;
    if (opts.kind == IntegratorKind::rk4) {
      const double th = t + 0.5 * dt;
      const Eigen::VectorXd k1 = rom_rhs(model, A, B, cur, t);
      const Eigen::VectorXd k2 = rom_rhs(model, A, B, cur + 0.5 * dt * k1, th);
      const Eigen::VectorXd k3 = rom_rhs(model, A, B, cur + 0.5 * dt * k2, th);
      const Eigen::VectorXd k4 = rom_rhs(model, A, B, cur + dt * k3, t_next);
      next = cur + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      const bool first = k == 0;
      const Eigen::VectorXd w = first ? cur : Eigen::VectorXd(2.0 * cur - prev);
      const double c0 = (first ? 1.0 : 1.5) / dt;
      const Eigen::MatrixXd system = c0 * I - A - B.linearize(w);
      const Eigen::VectorXd history = first ? cur : Eigen::VectorXd(2.0 * cur - 0.5 * prev);
      const Eigen::VectorXd rhs = history / dt + forcing_at(model, t_next, r);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
      if (!lu.isInvertible())
        throw StepError("ROM linear system is singular", k + 1);
      next = lu.solve(rhs);
    }
    check_state(next, opts.blowup, k + 1);
    traj.coeffs.row(static_cast<Eigen::Index>(k + 1)) = next.transpose();
    prev = cur;
    cur = next;
  }
  return traj;
}

double rom_error(const Eigen::MatrixXd &rom, const Eigen::MatrixXd &reference, const Eigen::MatrixXd &M_r,
                 double dt, double T) {
  if (rom.rows() != reference.rows() || rom.cols() != reference.cols())
    throw ConfigError("rom_error: trajectories have different shapes");
  return time_average(rom - reference, M_r, dt, T);
}

double rom_error(const RomTrajectory &rom, const Eigen::MatrixXd &reference, const Eigen::MatrixXd &M_r,
                 double T) {
  return rom_error(rom.coeffs, reference, M_r, rom.dt, T);
}

} // namespace cerom
