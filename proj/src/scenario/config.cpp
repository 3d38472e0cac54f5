#include "sccuc/scenario/config.hpp"

#include "sccuc/detail/json_fields.hpp"
#include "sccuc/error.hpp"

namespace sccuc::scenario {

namespace fs = std::filesystem;
using namespace detail;

solver::BranchingRule parse_branching(const std::string& s) {
  if (s == "most-fractional") return solver::BranchingRule::kMostFractional;
  if (s == "first-fractional") return solver::BranchingRule::kFirstFractional;
  throw SchemaError("unknown branching rule '" + s + "'");
}

solver::NodeSelection parse_node_selection(const std::string& s) {
  if (s == "best-bound") return solver::NodeSelection::kBestBound;
  if (s == "depth-first") return solver::NodeSelection::kDepthFirst;
  throw SchemaError("unknown node selection '" + s + "'");
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

fs::path existing(const fs::path& base, const nlohmann::json& doc, const std::string& key) {
  const auto p = resolve(base, require_string(doc, key, "config"));
  if (!fs::exists(p)) throw SchemaError("field 'config." + key + "': file not found: " + p.string());
  return p;
}

bool get_bool(const nlohmann::json& obj, const std::string& key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw SchemaError("field '" + where + "." + key + "' must be true or false");
  return v.get<bool>();
}

solver::SolveOptions parse_solver(const nlohmann::json& doc) {
  const std::string w = "config.solver";
  reject_unknown_keys(doc, {"relative_gap", "feasibility_tol", "integrality_tol", "node_limit", "time_limit",
                            "branching", "node_selection", "deterministic"},
                      w);
  solver::SolveOptions o;
  if (doc.contains("relative_gap")) o.relative_gap = require_number(doc, "relative_gap", w);
  if (doc.contains("feasibility_tol")) o.feasibility_tol = require_number(doc, "feasibility_tol", w);
  if (doc.contains("integrality_tol")) o.integrality_tol = require_number(doc, "integrality_tol", w);
  if (doc.contains("node_limit")) {
    const int n = require_int(doc, "node_limit", w);
    if (n < 1) throw SchemaError("field '" + w + ".node_limit' must be >= 1");
    o.node_limit = static_cast<std::size_t>(n);
  }
  if (doc.contains("time_limit")) o.time_limit = require_number(doc, "time_limit", w);
  if (doc.contains("branching")) o.branching = parse_branching(require_string(doc, "branching", w));
  if (doc.contains("node_selection")) o.node_selection = parse_node_selection(require_string(doc, "node_selection", w));
  o.deterministic = get_bool(doc, "deterministic", w, o.deterministic);
  try {
    solver::validate(o);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(w + ": " + e.what());
  }
  return o;
}

SurrogateSource parse_surrogate(const nlohmann::json& doc, const fs::path& base) {
  const std::string w = "config.surrogate";
  reject_unknown_keys(doc, {"mode", "path", "strategy", "samples", "alpha_grid", "holdout_fraction", "conservative_shift"}, w);
  SurrogateSource s;
  const std::string mode = require_string(doc, "mode", w);
  if (mode == "load") {
    s.mode = SurrogateSource::Mode::kLoad;
    s.path = resolve(base, require_string(doc, "path", w));
    if (!fs::exists(s.path)) throw SchemaError("field '" + w + ".path': file not found: " + s.path.string());
  } else if (mode != "train") {
    throw SchemaError("field '" + w + ".mode' must be 'train' or 'load'");
  }
  if (doc.contains("strategy")) {
    const std::string st = require_string(doc, "strategy", w);
    if (st == "random") {
      s.exhaustive = false;
      const int n = require_int(doc, "samples", w);
      if (n < 1) throw SchemaError("field '" + w + ".samples' must be >= 1");
      s.samples = static_cast<std::size_t>(n);
    } else if (st != "exhaustive") {
      throw SchemaError("field '" + w + ".strategy' must be 'exhaustive' or 'random'");
    }
  }
  if (doc.contains("alpha_grid")) {
    s.alpha_grid.clear();
    for (const auto& v : require_array(doc, "alpha_grid", w)) {
      if (!v.is_number()) throw SchemaError("field '" + w + ".alpha_grid' must hold numbers");
      s.alpha_grid.push_back(v.get<double>());
    }
    if (s.alpha_grid.empty()) throw SchemaError("field '" + w + ".alpha_grid' must not be empty");
  }
  if (doc.contains("holdout_fraction")) {
    s.holdout_fraction = require_number(doc, "holdout_fraction", w);
    if (!(s.holdout_fraction >= 0.0 && s.holdout_fraction < 1.0)) {
      throw SchemaError("field '" + w + ".holdout_fraction' must lie in [0,1)");
    }
  }
  s.conservative_shift = get_bool(doc, "conservative_shift", w, false);
  return s;
}

}  // namespace

ScenarioConfig parse_config(const nlohmann::json& doc, const fs::path& base_dir) {
  const std::string w = "config";
  reject_unknown_keys(doc, {"label", "notes", "grid", "series", "periods", "dr", "flags", "scc_threshold_pu", "solver",
                            "surrogate", "output_dir", "seed"},
                      w);
  ScenarioConfig c;
  c.label = require_string(doc, "label", w);
  if (c.label.empty() || c.label.find_first_of("/\\ ") != std::string::npos) {
    throw SchemaError("field 'config.label' must be a non-empty name without spaces or slashes");
  }
  c.grid_path = existing(base_dir, doc, "grid");
  c.series_path = existing(base_dir, doc, "series");
  if (doc.contains("periods")) {
    const int T = require_int(doc, "periods", w);
    if (T < 1) throw SchemaError("field 'config.periods' must be >= 1");
    c.periods = static_cast<std::size_t>(T);
  }
  if (doc.contains("dr")) c.dr = dr::parse_dr_spec(doc.at("dr"), "config.dr");
  const auto& flags = require(doc, "flags", w);
  reject_unknown_keys(flags, {"dr_enabled", "scc_enabled", "relax_eta"}, "config.flags");
  c.flags.dr_enabled = get_bool(flags, "dr_enabled", "config.flags", false);
  c.flags.scc_enabled = get_bool(flags, "scc_enabled", "config.flags", false);
  c.flags.relax_eta = get_bool(flags, "relax_eta", "config.flags", true);
  if (doc.contains("scc_threshold_pu")) {
    c.scc_threshold = require_number(doc, "scc_threshold_pu", w);
    if (!(*c.scc_threshold > 0.0)) throw SchemaError("field 'config.scc_threshold_pu' must be > 0");
  }
  if (doc.contains("solver")) c.solve = parse_solver(doc.at("solver"));
  c.surrogate = parse_surrogate(require(doc, "surrogate", w), base_dir);
  c.output_dir = resolve(base_dir, require_string(doc, "output_dir", w));
  if (doc.contains("seed")) {
    const auto& v = doc.at("seed");
    if (!v.is_number_unsigned()) throw SchemaError("field 'config.seed' must be a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  return c;
}

ScenarioConfig load_config(const fs::path& path) {
  return parse_config(read_json_file(path), fs::absolute(path).parent_path());
}

}  // namespace sccuc::scenario
