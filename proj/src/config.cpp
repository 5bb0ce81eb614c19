#include "cerom/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "cerom/errors.hpp"

namespace cerom {

using nlohmann::json;

Problem parse_problem(std::string_view name) {
  if (name == "burgers_smooth")
    return Problem::burgers_smooth;
  if (name == "burgers_step")
    return Problem::burgers_step;
  if (name == "external")
    return Problem::external;
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

std::string to_string(Problem p) {
  switch (p) {
  case Problem::burgers_smooth:
    return "burgers_smooth";
  case Problem::burgers_step:
    return "burgers_step";
  case Problem::external:
    return "external";
  }
  return "?";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

const std::set<std::string> kTopKeys = {"problem", "nu", "n_cells", "dt", "t_end", "snapshot_file", "pod",
                                        "filters", "r", "variants", "seed", "output_dir", "options"};
const std::set<std::string> kPodKeys = {"rank_tol", "d"};
const std::set<std::string> kOptionKeys = {"include_t0", "integrator", "fit_rcond",
                                           "fit_state", "ice_fit", "delta_select"};

void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
  for (const auto &[key, value] : obj.items())
    if (!allowed.contains(key))
      throw ConfigError("unknown key '" + where + key + "'");
}

template <typename T> T get(const json &obj, const char *key, const std::string &where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ConfigError("bad value for '" + where + key + "': " + e.what());
  }
}

double positive(double v, const char *name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string(name) + " must be positive");
  return v;
}

} // namespace

void apply_override(json &doc, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded())
    value = text;

  json *node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty())
      throw ConfigError("override '" + assignment + "' has an empty key segment");
    if (!node->is_object())
      throw ConfigError("override '" + assignment + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null())
      *node = json::object();
    start = dot + 1;
  }
}

ExperimentConfig config_from_json(const json &doc) {
  if (!doc.is_object())
    throw ConfigError("config must be a JSON object");
  reject_unknown(doc, kTopKeys, "");

  ExperimentConfig cfg;
  cfg.problem = parse_problem(get<std::string>(doc, "problem", ""));
  if (doc.contains("nu"))
    cfg.nu = positive(get<double>(doc, "nu", ""), "nu");
  if (doc.contains("n_cells")) {
    const auto n = get<std::int64_t>(doc, "n_cells", "");
    if (n < 2)
      throw ConfigError("n_cells must be >= 2");
    cfg.n_cells = static_cast<std::size_t>(n);
  }
  if (doc.contains("dt"))
    cfg.dt = positive(get<double>(doc, "dt", ""), "dt");
  if (doc.contains("t_end"))
    cfg.t_end = positive(get<double>(doc, "t_end", ""), "t_end");
  step_count(cfg.dt, cfg.t_end);
  if (doc.contains("snapshot_file"))
    cfg.snapshot_file = get<std::string>(doc, "snapshot_file", "");
  if (cfg.problem == Problem::external && cfg.snapshot_file.empty())
    throw ConfigError("problem 'external' requires snapshot_file");

  if (doc.contains("pod")) {
    const json &pod = doc.at("pod");
    if (!pod.is_object())
      throw ConfigError("'pod' must be an object");
    reject_unknown(pod, kPodKeys, "pod.");
    if (pod.contains("rank_tol")) {
      cfg.rank_tol = get<double>(pod, "rank_tol", "pod.");
      if (!(cfg.rank_tol > 0.0 && cfg.rank_tol < 1.0))
        throw ConfigError("pod.rank_tol must lie in (0, 1)");
    }
    if (pod.contains("d")) {
      const auto d = get<std::int64_t>(pod, "d", "pod.");
      if (d < 1)
        throw ConfigError("pod.d must be >= 1");
      cfg.pinned_d = d;
    }
  }

  if (!doc.contains("filters") || !doc.at("filters").is_array() || doc.at("filters").empty())
    throw ConfigError("'filters' must be a non-empty array");
  for (const json &f : doc.at("filters")) {
    if (!f.is_object())
      throw ConfigError("each filter must be an object");
    reject_unknown(f, {"kind", "delta"}, "filters[].");
    FilterSpec spec;
    spec.kind = parse_filter_kind(get<std::string>(f, "kind", "filters[]."));
    if (spec.kind == FilterKind::differential) {
      spec.delta = get<double>(f, "delta", "filters[].");
      if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta))
        throw ConfigError("filter delta must be >= 0");
    } else if (f.contains("delta")) {
      throw ConfigError("projection filters take no delta");
    }
    cfg.filters.push_back(spec);
  }

  if (!doc.contains("r") || !doc.at("r").is_array() || doc.at("r").empty())
    throw ConfigError("'r' must be a non-empty array");
  for (const json &v : doc.at("r")) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
      throw ConfigError("r values must be positive integers");
    const auto r = v.get<std::int64_t>();
    if (cfg.pinned_d > 0 && r > cfg.pinned_d)
      throw ConfigError("r=" + std::to_string(r) + " exceeds pinned d=" + std::to_string(cfg.pinned_d));
    cfg.r_values.push_back(r);
  }

  if (doc.contains("variants")) {
    if (!doc.at("variants").is_array() || doc.at("variants").empty())
      throw ConfigError("'variants' must be a non-empty array");
    for (const json &v : doc.at("variants")) {
      if (!v.is_string())
        throw ConfigError("variants must be strings");
      cfg.variants.push_back(parse_variant(v.get<std::string>()));
    }
  } else {
    cfg.variants = {RomVariant::grom, RomVariant::ddc, RomVariant::ice_ddc, RomVariant::ce_ddc};
  }

  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned())
      throw ConfigError("seed must be a non-negative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("output_dir"))
    cfg.output_dir = get<std::string>(doc, "output_dir", "");

  if (doc.contains("options")) {
    const json &o = doc.at("options");
    if (!o.is_object())
      throw ConfigError("'options' must be an object");
    reject_unknown(o, kOptionKeys, "options.");
    RunOptions &opt = cfg.options;
    if (o.contains("include_t0"))
      opt.include_t0 = get<bool>(o, "include_t0", "options.");
    if (o.contains("integrator"))
      opt.integrator = parse_integrator(get<std::string>(o, "integrator", "options."));
    if (o.contains("fit_rcond")) {
      opt.fit_rcond = get<double>(o, "fit_rcond", "options.");
      if (!(opt.fit_rcond > 0.0 && opt.fit_rcond < 1.0))
        throw ConfigError("options.fit_rcond must lie in (0, 1)");
    }
    if (o.contains("fit_state"))
      opt.fit_state = parse_fit_state(get<std::string>(o, "fit_state", "options."));
    if (o.contains("ice_fit")) {
      const auto s = get<std::string>(o, "ice_fit", "options.");
      if (s == "ddc")
        opt.ice_fit = IceFit::ddc;
      else if (s == "tau_minus_ce")
        opt.ice_fit = IceFit::tau_minus_ce;
      else
        throw ConfigError("unknown options.ice_fit '" + s + "'");
    }
    if (o.contains("delta_select")) {
      const auto s = get<std::string>(o, "delta_select", "options.");
      if (s == "fixed")
        opt.delta_select = DeltaSelect::fixed;
      else if (s == "best")
        opt.delta_select = DeltaSelect::best;
      else
        throw ConfigError("unknown options.delta_select '" + s + "'");
    }
  }
  return cfg;
}

json ExperimentConfig::canonical() const {
  json j;
  j["problem"] = to_string(problem);
  j["nu"] = nu;
  j["n_cells"] = n_cells;
  j["dt"] = dt;
  j["t_end"] = t_end;
  if (problem == Problem::external)
    j["snapshot_file"] = snapshot_file.string();
  j["pod"] = {{"rank_tol", rank_tol}, {"d", pinned_d}};
  j["filters"] = json::array();
  for (const auto &f : filters) {
    json jf = {{"kind", to_string(f.kind)}};
    if (f.kind == FilterKind::differential)
      jf["delta"] = f.delta;
    j["filters"].push_back(jf);
  }
  j["r"] = r_values;
  j["variants"] = json::array();
  for (auto v : variants)
    j["variants"].push_back(to_string(v));
  j["seed"] = seed;
  j["options"] = {
      {"include_t0", options.include_t0},
      {"integrator", options.integrator == IntegratorKind::bdf2 ? "bdf2" : "rk4"},
      {"fit_rcond", options.fit_rcond},
      {"fit_state", options.fit_state == FitState::truncated ? "truncated" : "filtered"},
      {"ice_fit", options.ice_fit == IceFit::ddc ? "ddc" : "tau_minus_ce"},
      {"delta_select", options.delta_select == DeltaSelect::fixed ? "fixed" : "best"},
  };
  return j;
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical().dump())));
  return buf;
}

ExperimentConfig load_config(const std::filesystem::path &path, const std::vector<std::string> &overrides) {
  std::ifstream f(path);
  if (!f)
    throw ConfigError("cannot open config '" + path.string() + "'");
  json doc = json::parse(f, nullptr, false, true);
  if (doc.is_discarded())
    throw ConfigError("config '" + path.string() + "' is not valid JSON");
  for (const auto &o : overrides)
    apply_override(doc, o);
  ExperimentConfig cfg = config_from_json(doc);
  // Relative snapshot paths resolve against the config's directory.
  if (!cfg.snapshot_file.empty() && cfg.snapshot_file.is_relative())
    cfg.snapshot_file = path.parent_path() / cfg.snapshot_file;
  return cfg;
}

} // namespace cerom
