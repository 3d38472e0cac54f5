// Command-line front end: train-scc, solve, report, compare, export-mps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sccuc/error.hpp"
#include "sccuc/network/grid.hpp"
#include "sccuc/scenario/config.hpp"
#include "sccuc/scenario/scenario.hpp"
#include "sccuc/solver/mps.hpp"
#include "sccuc/surrogate/surrogate.hpp"

namespace fs = std::filesystem;
using namespace sccuc;

namespace {

struct Overrides {
  std::string case_id;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> gap;
  std::optional<double> time_limit;
  std::optional<std::size_t> periods;
  std::optional<std::string> surrogate;
  bool deterministic = false;
  bool binary_eta = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--case", o.case_id, "A: no DR/no SCC, B: DR/no SCC, C: DR+SCC (overrides config flags)")
      ->check(CLI::IsMember({"A", "B", "C"}));
  cmd->add_option("--out", o.out, "output directory (overrides config)");
  cmd->add_option("--seed", o.seed, "sampling/split seed");
  cmd->add_option("--gap", o.gap, "relative gap tolerance");
  cmd->add_option("--time-limit", o.time_limit, "seconds; ignored with --deterministic");
  cmd->add_option("--periods", o.periods, "use the first N periods");
  cmd->add_option("--surrogate", o.surrogate, "load this surrogate file instead of training");
  cmd->add_flag("--deterministic", o.deterministic, "serial, limit-free node order");
  cmd->add_flag("--binary-eta", o.binary_eta, "declare pair products binary");
}

scenario::ScenarioConfig apply(scenario::ScenarioConfig c, const Overrides& o) {
  if (o.case_id == "A") c.flags.dr_enabled = c.flags.scc_enabled = false;
  if (o.case_id == "B") {
    c.flags.dr_enabled = true;
    c.flags.scc_enabled = false;
  }
  if (o.case_id == "C") c.flags.dr_enabled = c.flags.scc_enabled = true;
  if (!o.case_id.empty()) c.label += "_" + o.case_id;
  if (o.out) c.output_dir = *o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.gap) c.solve.relative_gap = *o.gap;
  if (o.time_limit) c.solve.time_limit = *o.time_limit;
  if (o.periods) c.periods = *o.periods;
  if (o.surrogate) {
    c.surrogate.mode = scenario::SurrogateSource::Mode::kLoad;
    c.surrogate.path = *o.surrogate;
  }
  if (o.deterministic) c.solve.deterministic = true;
  if (o.binary_eta) c.flags.relax_eta = false;
  return c;
}

void print_reports(const scenario::Bundle& b, const scenario::Reports& r) {
  std::printf("%s: status %s, objective %.6f\n", b.label.c_str(), solver::to_string(b.status).c_str(), b.objective);
  std::printf("  operation %.2f  payment %.2f  total %.2f\n", r.costs.operation, r.costs.payment, r.costs.total);
  std::printf("  demand average %.2f (baseline %.2f), curtailment %.2f, shifted %.2f\n", r.demand_average,
              r.baseline_average, r.curtailment_total, r.shift_total);
  std::printf("  inadequate buses (surrogate):");
  for (int bus : r.inadequate) std::printf(" %d", bus);
  std::printf("\n  inadequate buses (oracle):");
  for (int bus : r.inadequate_oracle) std::printf(" %d", bus);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SCC-constrained unit commitment with demand response"};
  app.require_subcommand(1);

  // train-scc
  auto* train = app.add_subcommand("train-scc", "sample the fault oracle and fit the linear SCC surrogate");
  std::string grid_path, train_out = "surrogate_out", strategy = "exhaustive";
  std::size_t samples = 5000;
  std::vector<double> alpha_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  double holdout = 0.2;
  std::uint64_t train_seed = 7;
  bool shift = false;
  train->add_option("--grid", grid_path, "grid file")->required()->check(CLI::ExistingFile);
  train->add_option("--out", train_out, "output directory");
  train->add_option("--strategy", strategy)->check(CLI::IsMember({"exhaustive", "random"}));
  train->add_option("--samples", samples, "sample count for the random strategy");
  train->add_option("--alpha-grid", alpha_grid, "availability levels")->delimiter(',');
  train->add_option("--holdout", holdout, "fraction held out for validation")->check(CLI::Range(0.0, 0.99));
  train->add_option("--seed", train_seed);
  train->add_flag("--conservative-shift", shift, "shift each bus down by its max overestimate");

  // solve
  auto* solve = app.add_subcommand("solve", "run one scenario end to end");
  std::string config_path;
  Overrides solve_o;
  solve->add_option("--config", config_path, "scenario file")->required()->check(CLI::ExistingFile);
  add_overrides(solve, solve_o);

  // report
  auto* report = app.add_subcommand("report", "rebuild the reports from a solution file");
  std::string solution_path, report_out;
  report->add_option("solution", solution_path, "solution.json or its directory")->required()->check(CLI::ExistingPath);
  report->add_option("--out", report_out, "write the report files here");

  // compare
  auto* compare = app.add_subcommand("compare", "side-by-side comparison of solved scenarios");
  std::vector<std::string> bundles;
  std::string compare_out;
  compare->add_option("bundles", bundles, "solution files or directories")->required()->expected(2, -1);
  compare->add_option("--out", compare_out, "write the table to this file");

  // export-mps
  auto* mps = app.add_subcommand("export-mps", "write the scenario MILP as free-format MPS");
  std::string mps_config, mps_out;
  Overrides mps_o;
  mps->add_option("--config", mps_config, "scenario file")->required()->check(CLI::ExistingFile);
  mps->add_option("--mps", mps_out, "MPS file")->required();
  add_overrides(mps, mps_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      auto grid = network::load_grid(grid_path);
      scenario::SurrogateSource src;
      src.exhaustive = strategy == "exhaustive";
      src.samples = samples;
      src.alpha_grid = alpha_grid;
      src.holdout_fraction = holdout;
      src.conservative_shift = shift;
      const auto s = scenario::train_surrogate(grid, src, train_seed, train_out);
      double worst = 0.0;
      for (const auto& d : s.diagnostics) worst = std::max(worst, d.normal_residual);
      std::printf("surrogate: %zu buses, %zu features, worst normal residual %.3g\n", s.num_buses(), s.num_features(), worst);
      std::printf("wrote %s\n", (fs::path(train_out) / "surrogate.json").string().c_str());
      return 0;
    }
    if (*solve) {
      const auto cfg = apply(scenario::load_config(config_path), solve_o);
      const auto run = scenario::run_scenario(cfg);
      if (run.reports) {
        print_reports(run.bundle, *run.reports);
      } else {
        std::printf("%s: status %s, no solution\n", run.bundle.label.c_str(), solver::to_string(run.bundle.status).c_str());
      }
      std::printf("nodes %zu, wall time %.2f s, output %s\n", run.solve.nodes, run.solve.wall_time, run.dir.string().c_str());
      return scenario::exit_code(run.bundle.status, run.bundle.solution.has_value());
    }
    if (*report) {
      const auto b = scenario::load_bundle(solution_path);
      const auto r = scenario::derive_reports(b);
      if (!report_out.empty()) {
        fs::create_directories(report_out);
        scenario::write_reports(b, r, report_out);
      }
      print_reports(b, r);
      return 0;
    }
    if (*compare) {
      std::vector<scenario::Bundle> loaded;
      for (const auto& p : bundles) loaded.push_back(scenario::load_bundle(p));
      const std::string table = scenario::compare_scenarios(loaded);
      if (!compare_out.empty()) {
        std::ofstream f(compare_out);
        f << table;
      }
      std::cout << table;
      return 0;
    }
    if (*mps) {
      const auto cfg = apply(scenario::load_config(mps_config), mps_o);
      const auto grid = network::load_grid(cfg.grid_path);
      auto inputs = uc::load_series(cfg.series_path, grid);
      if (cfg.periods) inputs = inputs.truncated(*cfg.periods);
      std::optional<dr::DrSpec> spec;
      if (cfg.flags.dr_enabled) spec = cfg.dr;
      auto model = uc::build_uc_milp(grid, inputs, spec, cfg.flags);
      if (cfg.flags.scc_enabled) {
        const auto s = cfg.surrogate.mode == scenario::SurrogateSource::Mode::kLoad
                           ? surrogate::load_surrogate(cfg.surrogate.path)
                           : scenario::train_surrogate(grid, cfg.surrogate, cfg.seed, cfg.output_dir);
        uc::add_scc_constraints(model, s, cfg.scc_threshold.value_or(grid.scc_threshold), cfg.flags.relax_eta);
      }
      model.problem.name = cfg.label;
      solver::write_mps(model.problem, mps_out);
      std::printf("wrote %s: %zu columns (%zu integer), %zu rows\n", mps_out.c_str(), model.problem.num_cols(),
                  model.problem.num_integer(), model.problem.num_rows());
      return 0;
    }
  } catch (const scenario::StageError& e) {
    std::fprintf(stderr, "error in stage %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
