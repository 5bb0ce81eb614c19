#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "cerom/closure.hpp"
#include "cerom/filters_ce.hpp"
#include "cerom/rom_sim.hpp"

namespace cerom {

inline constexpr const char *kCodeVersion = "cerom 1.0.0";

enum class Problem { burgers_smooth, burgers_step, external };
Problem parse_problem(std::string_view name);
std::string to_string(Problem p);

enum class DeltaSelect { fixed, best };
enum class IceFit { ddc, tau_minus_ce };

struct RunOptions {
  bool include_t0 = true;
  IntegratorKind integrator = IntegratorKind::bdf2;
  double fit_rcond = 1e-6;
  FitState fit_state = FitState::truncated;
  IceFit ice_fit = IceFit::ddc;
  DeltaSelect delta_select = DeltaSelect::fixed;
};

struct ExperimentConfig {
  Problem problem = Problem::burgers_smooth;
  double nu = 0.1;
  std::size_t n_cells = 2048;
  double dt = 1e-3;
  double t_end = 1.0;
  std::filesystem::path snapshot_file; // external problem only
  double rank_tol = 1e-12;
  Eigen::Index pinned_d = 0;
  std::vector<FilterSpec> filters;
  std::vector<Eigen::Index> r_values;
  std::vector<RomVariant> variants;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  RunOptions options;

  /// Canonical JSON of everything that affects results (output_dir excluded).
  nlohmann::json canonical() const;
  /// FNV-1a 64 of canonical().dump(), as 16 hex digits.
  std::string hash() const;
};

/// Applies "a.b.c=value" to the JSON tree. The value is parsed as JSON when
/// possible, otherwise taken as a string.
void apply_override(nlohmann::json &doc, const std::string &assignment);

/// Parses and validates. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json &doc);

ExperimentConfig load_config(const std::filesystem::path &path, const std::vector<std::string> &overrides = {});

std::uint64_t fnv1a64(std::string_view bytes);

} // namespace cerom
