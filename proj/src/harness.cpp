#include "cerom/harness.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>

#include <omp.h>

#include "cerom/closure.hpp"
#include "cerom/errors.hpp"
#include "cerom/filters_ce.hpp"
#include "cerom/rom_sim.hpp"

namespace cerom {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string grid_label(Eigen::Index r, const FilterSpec &f) {
  char buf[96];
  if (f.kind == FilterKind::projection)
    std::snprintf(buf, sizeof buf, "[r=%ld, projection] ", static_cast<long>(r));
  else
    std::snprintf(buf, sizeof buf, "[r=%ld, differential delta=%g] ", static_cast<long>(r), f.delta);
  return buf;
}

// Re-throws with the grid point prepended, keeping the error category.
[[noreturn]] void rethrow_with_context(const std::string &label) {
  try {
    throw;
  } catch (const ConfigError &e) {
    throw ConfigError(label + e.what());
  } catch (const NumericalError &e) {
    throw NumericalError(label + e.what());
  }
}

int resolve_jobs(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

struct GridPoint {
  Eigen::Index r;
  FilterSpec filter;
};

std::vector<GridPoint> grid(const ExperimentConfig &cfg) {
  std::vector<GridPoint> out;
  for (const auto &f : cfg.filters)
    for (Eigen::Index r : cfg.r_values)
      out.push_back({r, f});
  return out;
}

// Runs body(k) for every grid point in an OpenMP pool; the first failure (in
// grid order) is rethrown after the loop.
template <typename Body> void run_pool(std::size_t n, int jobs, Body body) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_jobs(jobs))
  for (std::size_t k = 0; k < n; ++k) {
    try {
      body(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

Eigen::Index first_row(const ExperimentConfig &cfg) { return cfg.options.include_t0 ? 0 : 1; }

void check_r(const Dataset &data, Eigen::Index r) {
  if (r > data.basis.d)
    throw ConfigError("r=" + std::to_string(r) + " exceeds d=" + std::to_string(data.basis.d));
}

} // namespace

Dataset prepare_dataset(const ExperimentConfig &cfg) {
  Dataset data;
  data.nu = cfg.nu;
  auto start = Clock::now();
  if (cfg.problem == Problem::external) {
    data.snapshots = load_snapshots(cfg.snapshot_file);
  } else {
    const Mesh1D mesh = build_mesh(cfg.n_cells);
    const auto kind = cfg.problem == Problem::burgers_smooth ? InitialCondition::smooth : InitialCondition::step;
    DnsOptions opts;
    opts.nu = cfg.nu;
    opts.dt = cfg.dt;
    opts.t_end = cfg.t_end;
    data.snapshots = dns_solve(mesh, opts, initial_condition(kind, cfg.nu, mesh));
    data.mesh = mesh;
  }
  data.dns_seconds = seconds_since(start);

  start = Clock::now();
  PodOptions pod;
  pod.rank_tol = cfg.rank_tol;
  pod.pinned_d = cfg.pinned_d;
  data.basis = compute_pod(data.snapshots, pod);
  data.traj = reduce_trajectory(data.snapshots, data.basis);
  data.pod_seconds = seconds_since(start);
  return data;
}

const TableRow *TableReport::find(Eigen::Index r, const std::string &metric, std::optional<double> delta) const {
  for (const auto &row : rows)
    if (row.r == r && row.metric == metric && (!delta || row.delta == *delta))
      return &row;
  return nullptr;
}

std::string ce_metric(FilterKind kind) { return "ce/" + to_string(kind); }

std::string rom_metric(RomVariant v, FilterKind kind) { return "err/" + to_string(v) + "/" + to_string(kind); }

TableReport run_ce_table(const ExperimentConfig &cfg, const Dataset &data, int jobs) {
  const auto points = grid(cfg);
  std::vector<TableRow> rows(points.size());
  const Eigen::Index first = first_row(cfg);
  const double dt = data.traj.dt;
  const double T = static_cast<double>(data.traj.count() - first) * dt;

  run_pool(points.size(), jobs, [&](std::size_t k) {
    const GridPoint &p = points[k];
    try {
      check_r(data, p.r);
      const FilterOperator filter(reduced_blocks(data.basis, p.r), p.filter);
      const auto samples = ce_trajectory(data.traj, filter, cfg.options.include_t0);
      const double value = avg_ce_norm(samples, filter.blocks().M_r, dt, T);
      rows[k] = {p.r, p.filter.kind == FilterKind::projection ? 0.0 : p.filter.delta, ce_metric(p.filter.kind),
                 value, false};
    } catch (...) {
      rethrow_with_context(grid_label(p.r, p.filter));
    }
  });

  TableReport report;
  report.name = "ce_table";
  report.rows = std::move(rows);
  report.config_hash = cfg.hash();
  return report;
}

namespace {

struct VariantResult {
  RomVariant variant;
  double value = 0.0;
  bool unstable = false;
};

std::vector<VariantResult> rom_grid_point(const ExperimentConfig &cfg, const Dataset &data, const GridPoint &p) {
  const Mesh1D &mesh = *data.mesh;
  const Eigen::Index r = p.r;
  const FilterOperator filter(reduced_blocks(data.basis, r), p.filter);
  const RomOperators ops = grom_operators(data.basis, r, data.nu, mesh);

  bool needs_targets = false;
  for (auto v : cfg.variants)
    needs_targets = needs_targets || v != RomVariant::grom;
  ClosureTargets targets;
  if (needs_targets)
    targets = correction_targets(data.traj, data.basis, filter, data.nu, mesh, cfg.options.fit_state, true);

  FitOptions fit_opts;
  fit_opts.rcond = cfg.options.fit_rcond;
  std::optional<FittedOperators> ddc_fit;
  auto ddc = [&]() -> const FittedOperators & {
    if (!ddc_fit)
      ddc_fit = fit_ansatz(targets.tau, targets.state, fit_opts);
    return *ddc_fit;
  };

  const Eigen::MatrixXd reference = data.traj.coeffs.leftCols(r);
  const Eigen::VectorXd a0 = reference.row(0).transpose();
  const double dt = data.traj.dt;
  const double t_end = static_cast<double>(data.traj.count() - 1) * dt;
  const Eigen::Index first = first_row(cfg);
  const Eigen::Index kept = data.traj.count() - first;
  const double T = static_cast<double>(kept) * dt;

  IntegrateOptions iopts;
  iopts.kind = cfg.options.integrator;
  iopts.t0 = data.traj.t0;

  std::vector<VariantResult> out;
  for (RomVariant v : cfg.variants) {
    RomModel model;
    switch (v) {
    case RomVariant::grom:
      model = assemble_model(v, ops);
      break;
    case RomVariant::ddc:
      model = assemble_model(v, ops, ddc());
      break;
    case RomVariant::ice_ddc: {
      ForcingSeries forcing{targets.e_ce, dt, data.traj.t0};
      if (cfg.options.ice_fit == IceFit::ddc)
        model = assemble_model(v, ops, ddc(), forcing);
      else
        model = assemble_model(v, ops, fit_ansatz(targets.tau - targets.e_ce, targets.state, fit_opts), forcing);
      break;
    }
    case RomVariant::ce_ddc:
      model = assemble_model(v, ops, fit_ansatz(targets.tau + targets.e_ce, targets.state, fit_opts));
      break;
    }
    VariantResult res{v};
    try {
      const RomTrajectory traj = integrate(model, a0, dt, t_end, iopts);
      res.value = rom_error(traj.coeffs.bottomRows(kept), reference.bottomRows(kept),
                            filter.blocks().M_r, dt, T);
    } catch (const StepError &) {
      res.unstable = true;
      res.value = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(res);
  }
  return out;
}

} // namespace

TableReport run_rom_table(const ExperimentConfig &cfg, const Dataset &data, int jobs) {
  if (!data.mesh)
    throw ConfigError("rom-table needs the FE mesh to build the convection operators; "
                      "external snapshot sets support ce-table, pod and verify only");
  const auto points = grid(cfg);
  std::vector<std::vector<VariantResult>> results(points.size());

  run_pool(points.size(), jobs, [&](std::size_t k) {
    const GridPoint &p = points[k];
    try {
      check_r(data, p.r);
      results[k] = rom_grid_point(cfg, data, p);
    } catch (...) {
      rethrow_with_context(grid_label(p.r, p.filter));
    }
  });

  TableReport report;
  report.name = "rom_table";
  report.config_hash = cfg.hash();
  const bool best = cfg.options.delta_select == DeltaSelect::best;

  for (std::size_t k = 0; k < points.size(); ++k) {
    const GridPoint &p = points[k];
    if (best && p.filter.kind == FilterKind::differential)
      continue;
    const double delta = p.filter.kind == FilterKind::projection ? 0.0 : p.filter.delta;
    for (const auto &res : results[k])
      report.rows.push_back({p.r, delta, rom_metric(res.variant, p.filter.kind), res.value, res.unstable});
  }

  if (best) {
    // Per (r, variant): the differential-filter delta with the smallest stable error.
    for (Eigen::Index r : cfg.r_values) {
      for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
        TableRow candidate;
        bool any = false;
        for (std::size_t k = 0; k < points.size(); ++k) {
          const GridPoint &p = points[k];
          if (p.r != r || p.filter.kind != FilterKind::differential)
            continue;
          const VariantResult &res = results[k][vi];
          if (!any) {
            candidate = {r, p.filter.delta, rom_metric(res.variant, FilterKind::differential), res.value,
                         res.unstable};
            any = true;
          }
          if (!res.unstable && (candidate.unstable || res.value < candidate.value))
            candidate = {r, p.filter.delta, rom_metric(res.variant, FilterKind::differential), res.value, false};
        }
        if (any)
          report.rows.push_back(candidate);
      }
    }
  }
  return report;
}

std::string to_csv(const TableReport &report) {
  std::string out = "r,delta,metric,value\n";
  char buf[64];
  for (const auto &row : report.rows) {
    out += std::to_string(row.r);
    std::snprintf(buf, sizeof buf, ",%.10e,", row.delta);
    out += buf;
    out += row.metric;
    if (row.unstable) {
      out += ",unstable\n";
    } else {
      std::snprintf(buf, sizeof buf, ",%.10e\n", row.value);
      out += buf;
    }
  }
  return out;
}

void write_report(const TableReport &report, const ExperimentConfig &cfg, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  const auto csv_path = dir / (report.name + ".csv");
  {
    std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
    if (!f)
      throw ConfigError("cannot write '" + csv_path.string() + "'");
    f << to_csv(report);
  }
  std::size_t unstable = 0;
  for (const auto &row : report.rows)
    unstable += row.unstable ? 1 : 0;
  nlohmann::json manifest = {
      {"table", report.name},
      {"csv", csv_path.filename().string()},
      {"config_hash", report.config_hash},
      {"code_version", report.code_version},
      {"config", cfg.canonical()},
      {"rows", report.rows.size()},
      {"unstable_cells", unstable},
  };
  const auto manifest_path = dir / (report.name + ".manifest.json");
  std::ofstream f(manifest_path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw ConfigError("cannot write '" + manifest_path.string() + "'");
  f << manifest.dump(2) << '\n';
}

} // namespace cerom
