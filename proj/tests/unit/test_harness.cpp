#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cerom/errors.hpp"
#include "cerom/harness.hpp"
#include "cerom/verify.hpp"

using namespace cerom;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.problem = Problem::burgers_smooth;
  cfg.nu = 0.1;
  cfg.n_cells = 256;
  cfg.t_end = 0.2;
  cfg.pinned_d = 4;
  cfg.filters = {{FilterKind::projection, 0.0}, {FilterKind::differential, 0.01}};
  cfg.r_values = {1, 2, 4};
  cfg.variants = {RomVariant::grom, RomVariant::ddc, RomVariant::ice_ddc, RomVariant::ce_ddc};
  return cfg;
}

const Dataset &small_data() {
  static const Dataset data = prepare_dataset(small_config());
  return data;
}

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / "cerom_unit" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

} // namespace

TEST_CASE("ce-table rows and CSV layout") {
  const ExperimentConfig cfg = small_config();
  const TableReport rep = run_ce_table(cfg, small_data(), 1);
  CHECK(rep.rows.size() == 6);
  CHECK(rep.config_hash == cfg.hash());
  const TableRow *full = rep.find(4, ce_metric(FilterKind::projection));
  REQUIRE(full != nullptr);
  CHECK(full->value < 1e-12);
  const TableRow *df = rep.find(2, ce_metric(FilterKind::differential), 0.01);
  REQUIRE(df != nullptr);
  CHECK(df->value > 0.0);

  const std::string csv = to_csv(rep);
  CHECK(csv.rfind("r,delta,metric,value\n", 0) == 0);
  CHECK(csv.find("2,1.0000000000e-02,ce/differential,") != std::string::npos);
}

TEST_CASE("rom-table covers every variant and is independent of the job count") {
  const ExperimentConfig cfg = small_config();
  const TableReport one = run_rom_table(cfg, small_data(), 1);
  const TableReport two = run_rom_table(cfg, small_data(), 2);
  CHECK(one.rows.size() == 2 * 3 * 4);
  CHECK(to_csv(one) == to_csv(two));

  // r = d: every variant collapses onto the G-ROM.
  const double g = one.find(4, rom_metric(RomVariant::grom, FilterKind::projection))->value;
  for (auto v : {RomVariant::ddc, RomVariant::ice_ddc, RomVariant::ce_ddc})
    CHECK(one.find(4, rom_metric(v, FilterKind::projection))->value == doctest::Approx(g).epsilon(1e-6));
}

TEST_CASE("best-delta selection records the chosen delta") {
  ExperimentConfig cfg = small_config();
  cfg.filters = {{FilterKind::differential, 0.1}, {FilterKind::differential, 0.001}};
  cfg.r_values = {2};
  cfg.options.delta_select = DeltaSelect::best;
  const TableReport rep = run_rom_table(cfg, small_data(), 1);
  CHECK(rep.rows.size() == 4);
  for (const auto &row : rep.rows)
    CHECK((row.delta == 0.1 || row.delta == 0.001));
  cfg.options.delta_select = DeltaSelect::fixed;
  const TableReport fixed = run_rom_table(cfg, small_data(), 1);
  for (const auto &row : rep.rows) {
    const TableRow *a = fixed.find(2, row.metric, 0.1);
    const TableRow *b = fixed.find(2, row.metric, 0.001);
    CHECK(row.value == std::min(a->value, b->value));
  }
}

TEST_CASE("report files are written without volatile fields") {
  const ExperimentConfig cfg = small_config();
  const fs::path dir = scratch("report");
  write_report(run_ce_table(cfg, small_data()), cfg, dir);
  CHECK(fs::exists(dir / "ce_table.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "ce_table.manifest.json"));
  CHECK(manifest["config_hash"] == cfg.hash());
  CHECK(manifest["rows"] == 6);
  CHECK_FALSE(manifest.contains("timestamp"));
}

TEST_CASE("external snapshots: ce-table works, rom-table refuses") {
  const fs::path dir = scratch("external");
  save_snapshots(small_data().snapshots, dir / "snap.roms");
  ExperimentConfig cfg = small_config();
  cfg.problem = Problem::external;
  cfg.snapshot_file = dir / "snap.roms";
  cfg.filters = {{FilterKind::projection, 0.0}};
  cfg.r_values = {4};
  const Dataset ext = prepare_dataset(cfg);
  CHECK_FALSE(ext.mesh.has_value());
  const TableReport rep = run_ce_table(cfg, ext);
  CHECK(rep.rows.at(0).value < 1e-12);
  CHECK_THROWS_AS(run_rom_table(cfg, ext), ConfigError);

  const auto checks = run_property_suite(ext, 1);
  CHECK(all_passed(checks));
}

TEST_CASE("grid errors carry their grid point") {
  ExperimentConfig cfg = small_config();
  cfg.pinned_d = 0;
  cfg.r_values = {50};
  try {
    run_ce_table(cfg, small_data());
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("[r=50") != std::string::npos);
  }
}

TEST_CASE("property suite passes on internal data") {
  const auto checks = run_property_suite(small_data(), 7);
  CHECK(checks.size() == 6);
  for (const auto &c : checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
    CHECK_FALSE(c.skipped);
  }
}

#ifdef CEROM_CLI_PATH
TEST_CASE("CLI exit codes") {
  const fs::path dir = scratch("cli");
  const std::string cli = CEROM_CLI_PATH;
  {
    std::ofstream(dir / "bad.json") << R"({"problem": "burgers_smooth", "filters": [], "r": [1]})";
    std::ofstream(dir / "ok.json") << R"({"problem": "burgers_smooth", "n_cells": 64, "t_end": 0.05,
      "pod": {"d": 2}, "filters": [{"kind": "projection"}], "r": [1, 2]})";
  }
  auto run = [&](const std::string &args) {
    const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("ce-table --config " + (dir / "bad.json").string()) == 2);
  CHECK(run("ce-table --config " + (dir / "ok.json").string() + " --set pod.d=99") == 2);
  CHECK(run("rom-table --config " + (dir / "ok.json").string() + " --out " + (dir / "o").string()) == 0);
  CHECK(fs::exists(dir / "o" / "rom_table.csv"));
  CHECK(run("dns --config " + (dir / "ok.json").string() + " --out " + (dir / "o").string()) == 0);
  CHECK(fs::exists(dir / "o" / "snapshots.roms"));
  CHECK(run("verify --config " + (dir / "ok.json").string()) == 0);
  CHECK(run("frobnicate") == 2);
}
#endif
