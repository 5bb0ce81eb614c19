#pragma once

// Shared Burgers datasets (built once per test binary) and an independent
// quadrature path used as an oracle against the production kernels.

#include <random>

#include <Eigen/Dense>

#include "cerom/fe1d.hpp"
#include "cerom/harness.hpp"
#include "cerom/pod.hpp"

namespace fixtures {

inline const cerom::Dataset &smooth_nu1e1() {
  static const cerom::Dataset data = [] {
    cerom::ExperimentConfig cfg;
    cfg.problem = cerom::Problem::burgers_smooth;
    cfg.nu = 0.1;
    cfg.pinned_d = 7;
    return cerom::prepare_dataset(cfg);
  }();
  return data;
}

inline const cerom::Dataset &smooth_nu1e3() {
  static const cerom::Dataset data = [] {
    cerom::ExperimentConfig cfg;
    cfg.problem = cerom::Problem::burgers_smooth;
    cfg.nu = 1e-3;
    cfg.pinned_d = 3;
    return cerom::prepare_dataset(cfg);
  }();
  return data;
}

inline Eigen::VectorXd random_vector(std::mt19937_64 &rng, Eigen::Index n, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = dist(rng);
  return v;
}

/// Nodal values including the two zero Dirichlet nodes.
inline Eigen::VectorXd pad(const Eigen::VectorXd &interior) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(interior.size() + 2);
  full.segment(1, interior.size()) = interior;
  return full;
}

/// Simpson's rule per element, exact for cubics: int f g h dx where f, g, h are
/// piecewise linear (given by full nodal values). Pass a constant-one field to
/// drop a factor.
inline double simpson_triple(const Eigen::VectorXd &f, const Eigen::VectorXd &g, const Eigen::VectorXd &h,
                             double dx) {
  double s = 0.0;
  for (Eigen::Index e = 0; e + 1 < f.size(); ++e) {
    auto mid = [&](const Eigen::VectorXd &v) { return 0.5 * (v[e] + v[e + 1]); };
    s += dx / 6.0 * (f[e] * g[e] * h[e] + 4.0 * mid(f) * mid(g) * mid(h) + f[e + 1] * g[e + 1] * h[e + 1]);
  }
  return s;
}

/// Piecewise-constant derivative, returned as a per-element vector.
inline Eigen::VectorXd element_slopes(const Eigen::VectorXd &full, double dx) {
  return (full.tail(full.size() - 1) - full.head(full.size() - 1)) / dx;
}

/// (u v', w) for piecewise-linear u, v, w: v' is constant per element, so the
/// per-element integrand u w is quadratic and Simpson is exact.
inline double convect_form(const Eigen::VectorXd &u, const Eigen::VectorXd &v, const Eigen::VectorXd &w, double dx) {
  const Eigen::VectorXd dv = element_slopes(v, dx);
  double s = 0.0;
  for (Eigen::Index e = 0; e + 1 < u.size(); ++e) {
    const double um = 0.5 * (u[e] + u[e + 1]);
    const double wm = 0.5 * (w[e] + w[e + 1]);
    s += dv[e] * dx / 6.0 * (u[e] * w[e] + 4.0 * um * wm + u[e + 1] * w[e + 1]);
  }
  return s;
}

} // namespace fixtures
