#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sccuc/dr/dr.hpp"
#include "sccuc/solver/branch_and_bound.hpp"
#include "sccuc/uc/uc_model.hpp"

namespace sccuc::scenario {

struct SurrogateSource {
  enum class Mode { kTrain, kLoad };
  Mode mode = Mode::kTrain;
  std::filesystem::path path;  // load only
  bool exhaustive = true;
  std::size_t samples = 0;  // random sampling only
  std::vector<double> alpha_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  double holdout_fraction = 0.2;
  bool conservative_shift = false;
};

/// One dispatch case. Relative paths in the file are resolved against the
/// directory holding the config file.
struct ScenarioConfig {
  std::string label;
  std::filesystem::path grid_path;
  std::filesystem::path series_path;
  std::optional<std::size_t> periods;  // use the first N periods only
  dr::DrSpec dr;
  uc::UcFlags flags;
  std::optional<double> scc_threshold;  // defaults to the grid's threshold
  solver::SolveOptions solve;
  SurrogateSource surrogate;
  std::filesystem::path output_dir;
  std::uint64_t seed = 7;
};

/// Throws SchemaError (unknown keys, bad values, missing files) naming the
/// offending field.
ScenarioConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& path);

solver::BranchingRule parse_branching(const std::string& s);
solver::NodeSelection parse_node_selection(const std::string& s);

}  // namespace sccuc::scenario
