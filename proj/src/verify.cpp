#include "cerom/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "cerom/closure.hpp"
#include "cerom/filters_ce.hpp"
#include "cerom/kernels.hpp"

namespace cerom {

namespace {

std::string fmt(const char *format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

CheckResult bound_check(std::string name, double value, double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tol;
  c.passed = std::isfinite(value) && value <= tol;
  c.detail = fmt("%.3e", value) + " <= " + fmt("%.0e", tol);
  return c;
}

Eigen::VectorXd normal_vector(std::mt19937_64 &rng, Eigen::Index n) {
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = dist(rng);
  return v;
}

} // namespace

std::vector<CheckResult> run_property_suite(const Dataset &data, std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const PodBasis &basis = data.basis;
  const Eigen::Index d = basis.d;

  out.push_back(bound_check("pod_orthonormality", orthonormality_defect(basis, data.snapshots.mass), 1e-10));

  {
    CheckResult c;
    c.name = "pod_eigenvalues_sorted_nonnegative";
    const auto &s = basis.spectrum;
    bool ok = s.size() > 0 && s.minCoeff() >= 0.0;
    for (Eigen::Index j = 1; ok && j < s.size(); ++j)
      ok = s[j] <= s[j - 1];
    c.passed = ok;
    c.value = s.size() > 0 ? s.minCoeff() : 0.0;
    c.detail = ok ? "descending, min " + fmt("%.3e", c.value) : "ordering or sign violated";
    out.push_back(c);
  }

  if (data.mesh) {
    const Eigen::Index r = std::min<Eigen::Index>(3, d);
    const Tensor3 B = parallel::trilinear_tensor(*data.mesh, basis.Phi, r);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXd a = normal_vector(rng, r);
      worst = std::max(worst, std::abs(a.dot(B.contract(a))));
    }
    out.push_back(bound_check("trilinear_identity", worst, 1e-12));
  } else {
    CheckResult c;
    c.name = "trilinear_identity";
    c.passed = true;
    c.skipped = true;
    c.detail = "skipped: no FE mesh for external snapshots";
    out.push_back(c);
  }

  {
    const Eigen::Index r = std::max<Eigen::Index>(1, d / 2);
    const FilterOperator proj(reduced_blocks(basis, r), {FilterKind::projection, 0.0});
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXd a_d = normal_vector(rng, d);
      const Eigen::VectorXd once = proj.apply(a_d);
      Eigen::VectorXd padded = Eigen::VectorXd::Zero(d);
      padded.head(r) = once;
      const Eigen::VectorXd twice = proj.apply(padded);
      worst = std::max(worst, (twice - once).norm() / std::max(1e-300, once.norm()));
    }
    out.push_back(bound_check("projection_idempotence", worst, 1e-12));
  }

  {
    // Targets: tau when the mesh is known, otherwise the CE forcing.
    const Eigen::Index r = std::min<Eigen::Index>(2, d);
    const FilterOperator proj(reduced_blocks(basis, r), {FilterKind::projection, 0.0});
    Eigen::MatrixXd targets, state = data.traj.coeffs.leftCols(r);
    if (data.mesh) {
      targets = correction_targets(data.traj, basis, proj, data.nu, *data.mesh).tau;
    } else {
      targets.resize(data.traj.count(), r);
      for (Eigen::Index j = 0; j < data.traj.count(); ++j) {
        const CeSample s = proj.ce(data.traj.coeffs.row(j).transpose());
        targets.row(j) = (-data.nu * (s.b - s.c)).transpose();
      }
    }
    const FittedOperators fit = fit_ansatz(targets, state);
    CheckResult c;
    c.name = "least_squares_residual";
    c.value = fit.training_residual;
    c.tolerance = targets.norm();
    c.passed = c.value <= c.tolerance * (1.0 + 1e-12);
    c.detail = fmt("%.3e", c.value) + " <= zero-model " + fmt("%.3e", c.tolerance);
    out.push_back(c);
  }

  {
    const Eigen::Index r = std::min<Eigen::Index>(3, std::max<Eigen::Index>(1, d));
    const Eigen::Index m = 500;
    Eigen::MatrixXd a(m, r);
    for (Eigen::Index j = 0; j < m; ++j)
      a.row(j) = normal_vector(rng, r).transpose();
    FittedOperators truth;
    truth.A_tilde.resize(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
      truth.A_tilde.row(i) = normal_vector(rng, r).transpose();
    truth.B_tilde = Tensor3(r);
    for (Eigen::Index i = 0; i < r; ++i) {
      Eigen::MatrixXd raw(r, r);
      for (Eigen::Index k = 0; k < r; ++k)
        raw.row(k) = normal_vector(rng, r).transpose();
      truth.B_tilde.slices[static_cast<std::size_t>(i)] = 0.5 * (raw + raw.transpose());
    }
    const FittedOperators fit = fit_ansatz(evaluate_ansatz(truth, a), a);
    double num = (fit.A_tilde - truth.A_tilde).squaredNorm();
    double den = truth.A_tilde.squaredNorm();
    for (std::size_t i = 0; i < truth.B_tilde.slices.size(); ++i) {
      num += (fit.B_tilde.slices[i] - truth.B_tilde.slices[i]).squaredNorm();
      den += truth.B_tilde.slices[i].squaredNorm();
    }
    out.push_back(bound_check("synthetic_operator_recovery", std::sqrt(num / den), 1e-8));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult> &checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

} // namespace cerom
