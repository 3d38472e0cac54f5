#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sccuc/analysis/analysis.hpp"
#include "sccuc/scenario/config.hpp"
#include "sccuc/solver/branch_and_bound.hpp"
#include "sccuc/surrogate/surrogate.hpp"
#include "sccuc/uc/uc_model.hpp"

namespace sccuc::scenario {

/// Everything a solution file holds, in typed form.
struct Bundle {
  std::string label;
  solver::SolveStatus status = solver::SolveStatus::kInfeasible;
  double objective = 0.0;
  double best_bound = 0.0;
  std::size_t nodes = 0;
  uc::UcFlags flags;
  double scc_threshold = 0.0;
  network::GridModel grid;
  uc::TimeSeriesInputs inputs;
  std::optional<dr::DrSpec> dr_spec;
  surrogate::SccSurrogate surrogate;
  std::optional<uc::UcSolution> solution;  // absent when no incumbent was found
};

/// Reports derived from a bundle; nothing outside the bundle is consulted.
struct Reports {
  analysis::CostReport costs;
  analysis::SccProfile surrogate_profile;
  analysis::SccProfile oracle_profile;
  std::vector<int> inadequate;         // surrogate screening
  std::vector<int> inadequate_oracle;  // oracle screening
  double baseline_average = 0.0;
  double demand_average = 0.0;  // post-DR
  double curtailment_total = 0.0;
  double shift_total = 0.0;     // sum of shift-in
};

/// Stage tag for errors raised inside run_scenario ("train", "solve", ...).
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunResult {
  Bundle bundle;
  std::optional<Reports> reports;
  solver::SolveResult solve;
  std::filesystem::path dir;
};

/// Train-or-load surrogate, build, solve, analyse, and write under
/// config.output_dir:
///   solution.json   the bundle (byte-identical across deterministic reruns)
///   summary.json, costs.csv, scc_profile.csv, scc_profile_oracle.csv
///   solver.log      node log and wall time
///   surrogate.json, surrogate_scatter.csv, surrogate_diagnostics.csv (when trained)
RunResult run_scenario(const ScenarioConfig& config);

/// Surrogate training as done by run_scenario; writes the surrogate files to `dir`.
surrogate::SccSurrogate train_surrogate(const network::GridModel& grid, const SurrogateSource& src,
                                        std::uint64_t seed, const std::filesystem::path& dir);

nlohmann::json bundle_to_json(const Bundle& b);
Bundle bundle_from_json(const nlohmann::json& doc);
Bundle load_bundle(const std::filesystem::path& solution_file);
void write_bundle(const Bundle& b, const std::filesystem::path& path);

Reports derive_reports(const Bundle& b);
/// summary.json, costs.csv and the two profile tables.
void write_reports(const Bundle& b, const Reports& r, const std::filesystem::path& dir);

/// Side-by-side metrics with deltas against the first bundle; CSV text.
/// Throws DimensionError when the bundles were built on different grids.
std::string compare_scenarios(const std::vector<Bundle>& bundles);

/// Exit code convention of the CLI: 0 with an incumbent, 2 otherwise.
int exit_code(solver::SolveStatus s, bool has_solution);

}  // namespace sccuc::scenario
