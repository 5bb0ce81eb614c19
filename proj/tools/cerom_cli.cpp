// cerom: command-line driver for the ROM commutation-error lab.
//
//   cerom dns       --config c.json [--out dir]   snapshot file
//   cerom pod       --config c.json               basis diagnostics
//   cerom ce-table  --config c.json               average CE per (r, delta)
//   cerom rom-table --config c.json               ROM errors per (r, delta, variant)
//   cerom verify    --config c.json               algebraic property suite
//
// Exit codes: 0 success, 2 config error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cerom/errors.hpp"
#include "cerom/harness.hpp"
#include "cerom/verify.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  int jobs = 0;
  std::int64_t seed = -1;
};

void add_common(CLI::App *sub, CommonArgs &args) {
  sub->add_option("--config", args.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--set", args.sets, "override a config key, e.g. --set pod.d=7 (repeatable)");
  sub->add_option("--out", args.out, "output directory (overrides output_dir)");
  sub->add_option("--jobs", args.jobs, "grid-point worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", args.seed, "RNG seed for the property suite")->check(CLI::NonNegativeNumber);
}

cerom::ExperimentConfig resolve(const CommonArgs &args) {
  cerom::ExperimentConfig cfg = cerom::load_config(args.config, args.sets);
  if (!args.out.empty())
    cfg.output_dir = args.out;
  if (args.seed >= 0)
    cfg.seed = static_cast<std::uint64_t>(args.seed);
  return cfg;
}

int cmd_dns(const CommonArgs &args) {
  const auto cfg = resolve(args);
  if (cfg.problem == cerom::Problem::external)
    throw cerom::ConfigError("dns needs a burgers_* problem");
  const auto mesh = cerom::build_mesh(cfg.n_cells);
  const auto kind = cfg.problem == cerom::Problem::burgers_smooth ? cerom::InitialCondition::smooth
                                                                  : cerom::InitialCondition::step;
  cerom::DnsOptions opts;
  opts.nu = cfg.nu;
  opts.dt = cfg.dt;
  opts.t_end = cfg.t_end;
  const auto set = cerom::dns_solve(mesh, opts, cerom::initial_condition(kind, cfg.nu, mesh));
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = cfg.output_dir / "snapshots.roms";
  cerom::save_snapshots(set, path);
  std::printf("wrote %s (%ld dofs x %ld snapshots, %ju bytes)\n", path.c_str(), static_cast<long>(set.dof_count()),
              static_cast<long>(set.snapshot_count()), cerom::snapshot_file_size(set));
  return 0;
}

int cmd_pod(const CommonArgs &args) {
  const auto cfg = resolve(args);
  const auto data = cerom::prepare_dataset(cfg);
  const double lead = data.basis.spectrum[0];
  nlohmann::json out = {
      {"config_hash", cfg.hash()},
      {"code_version", cerom::kCodeVersion},
      {"d", data.basis.d},
      {"dofs", data.snapshots.dof_count()},
      {"snapshots", data.snapshots.snapshot_count()},
      {"orthonormality_defect", cerom::orthonormality_defect(data.basis, data.snapshots.mass)},
  };
  nlohmann::json eig = nlohmann::json::array();
  for (Eigen::Index j = 0; j < std::min<Eigen::Index>(data.basis.spectrum.size(), data.basis.d + 5); ++j)
    eig.push_back({{"j", j + 1}, {"lambda", data.basis.spectrum[j]}, {"ratio", data.basis.spectrum[j] / lead}});
  out["eigenvalues"] = eig;
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream(cfg.output_dir / "pod.json") << out.dump(2) << '\n';
  std::printf("d = %ld\n", static_cast<long>(data.basis.d));
  for (const auto &e : eig)
    std::printf("  lambda_%-3d %.6e  (ratio %.3e)\n", e["j"].get<int>(), e["lambda"].get<double>(),
                e["ratio"].get<double>());
  return 0;
}

int cmd_table(const CommonArgs &args, bool rom) {
  const auto cfg = resolve(args);
  const auto data = cerom::prepare_dataset(cfg);
  const auto report = rom ? cerom::run_rom_table(cfg, data, args.jobs) : cerom::run_ce_table(cfg, data, args.jobs);
  cerom::write_report(report, cfg, cfg.output_dir);
  std::fputs(cerom::to_csv(report).c_str(), stdout);
  return 0;
}

int cmd_verify(const CommonArgs &args) {
  const auto cfg = resolve(args);
  const auto data = cerom::prepare_dataset(cfg);
  const auto checks = cerom::run_property_suite(data, cfg.seed);
  for (const auto &c : checks)
    std::printf("[%s] %-36s %s\n", c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL"), c.name.c_str(),
                c.detail.c_str());
  return cerom::all_passed(checks) ? 0 : kExitNumerical;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"ROM commutation-error lab"};
  app.require_subcommand(1);
  CommonArgs args;
  auto *dns = app.add_subcommand("dns", "run the Burgers DNS and write a snapshot file");
  auto *pod = app.add_subcommand("pod", "POD basis diagnostics");
  auto *ce = app.add_subcommand("ce-table", "average commutation error table");
  auto *rom = app.add_subcommand("rom-table", "ROM error table");
  auto *verify = app.add_subcommand("verify", "run the algebraic property suite");
  for (auto *sub : {dns, pod, ce, rom, verify})
    add_common(sub, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (dns->parsed())
      return cmd_dns(args);
    if (pod->parsed())
      return cmd_pod(args);
    if (ce->parsed())
      return cmd_table(args, false);
    if (rom->parsed())
      return cmd_table(args, true);
    return cmd_verify(args);
  } catch (const cerom::ConfigError &e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const cerom::FormatError &e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitConfig;
  } catch (const cerom::NumericalError &e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
}
