#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cerom/config.hpp"
#include "cerom/fe1d.hpp"
#include "cerom/pod.hpp"
#include "cerom/snapshots.hpp"

namespace cerom {

/// Everything downstream of the snapshots. External data carries no mesh.
struct Dataset {
  std::optional<Mesh1D> mesh;
  SnapshotSet snapshots;
  PodBasis basis;
  ReducedTrajectory traj;
  double nu = 0.0;
  double dns_seconds = 0.0;
  double pod_seconds = 0.0;
};

/// Runs the DNS (or loads the snapshot file), then POD and the coefficient history.
Dataset prepare_dataset(const ExperimentConfig &cfg);

struct TableRow {
  Eigen::Index r = 0;
  double delta = 0.0;
  std::string metric;
  double value = 0.0;
  bool unstable = false;
};

struct TableReport {
  std::string name;
  std::vector<TableRow> rows;
  std::string config_hash;
  std::string code_version = kCodeVersion;

  /// First row matching (r, metric) and, if given, delta.
  const TableRow *find(Eigen::Index r, const std::string &metric, std::optional<double> delta = {}) const;
};

/// Metric names: "ce/<filter kind>" for CE rows, "err/<variant>/<filter kind>"
/// for ROM rows. Projection rows carry delta = 0.
std::string ce_metric(FilterKind kind);
std::string rom_metric(RomVariant v, FilterKind kind);

/// jobs <= 0 uses the OpenMP default.
TableReport run_ce_table(const ExperimentConfig &cfg, const Dataset &data, int jobs = 0);
TableReport run_rom_table(const ExperimentConfig &cfg, const Dataset &data, int jobs = 0);

/// "r,delta,metric,value" with %.10e numbers; unstable cells read "unstable".
std::string to_csv(const TableReport &report);

/// Writes <dir>/<name>.csv and <dir>/<name>.manifest.json.
void write_report(const TableReport &report, const ExperimentConfig &cfg, const std::filesystem::path &dir);

} // namespace cerom
