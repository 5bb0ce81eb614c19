#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "cerom/closure.hpp"

namespace cerom {

enum class IntegratorKind { bdf2, rk4 };
IntegratorKind parse_integrator(std::string_view name);

struct IntegrateOptions {
  IntegratorKind kind = IntegratorKind::bdf2;
  /// Any |a_i| above this aborts with a StepError.
  double blowup = 1e8;
  double t0 = 0.0;
};

struct RomTrajectory {
  Eigen::MatrixXd coeffs; // (steps+1) x r
  double dt = 0.0;
  double t0 = 0.0;
};

/// Right-hand side (A + A~) a + (B + B~)(a, a) + forcing(t).
Eigen::VectorXd rom_rhs(const RomModel &model, const Eigen::MatrixXd &A, const Tensor3 &B,
                        const Eigen::VectorXd &a, double t);

/// bdf2: linearised BDF2 with a backward-Euler first step; the quadratic term
/// is linearised about 2a^n - a^{n-1} (a^0 on the first step) and the forcing
/// is taken at t_{n+1}. rk4: classical four-stage Runge-Kutta.
RomTrajectory integrate(const RomModel &model, const Eigen::VectorXd &a0, double dt, double t_end,
                        const IntegrateOptions &opts = {});

/// Average L2(L2) distance: sqrt( sum_j e_j^T M_r e_j dt / T ).
double rom_error(const Eigen::MatrixXd &rom, const Eigen::MatrixXd &reference, const Eigen::MatrixXd &M_r,
                 double dt, double T);
double rom_error(const RomTrajectory &rom, const Eigen::MatrixXd &reference, const Eigen::MatrixXd &M_r,
                 double T);

} // namespace cerom
