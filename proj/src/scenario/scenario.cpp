#include "sccuc/scenario/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sccuc/detail/json_fields.hpp"
#include "sccuc/error.hpp"
#include "sccuc/surrogate/sampling.hpp"

namespace sccuc::scenario {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

solver::SolveStatus status_from_string(const std::string& s) {
  for (auto st : {solver::SolveStatus::kOptimal, solver::SolveStatus::kGapLimit, solver::SolveStatus::kInfeasible,
                  solver::SolveStatus::kUnbounded, solver::SolveStatus::kLimit}) {
    if (solver::to_string(st) == s) return st;
  }
  throw SchemaError("solution file: unknown status '" + s + "'");
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

json schedule_to_json(const Bundle& b) {
  const auto& sol = *b.solution;
  json gens = json::array();
  for (std::size_t g = 0; g < b.grid.num_generators(); ++g) {
    gens.push_back({{"id", b.grid.generators[g].id}, {"u", sol.u[g]}, {"p", sol.p[g]}, {"cst", sol.cst[g]}, {"csh", sol.csh[g]}});
  }
  json ibrs = json::array();
  for (std::size_t c = 0; c < b.grid.num_ibrs(); ++c) ibrs.push_back({{"id", b.grid.ibrs[c].id}, {"p", sol.pc[c]}});
  json out{{"generators", gens}, {"ibrs", ibrs}, {"eta", sol.eta}, {"demand_after_dr", sol.demand}, {"objective", sol.objective}};
  if (sol.dr_enabled) {
    out["dr"] = {{"curtail", sol.dr.curtail}, {"shift_in", sol.dr.shift_in}, {"shift_out", sol.dr.shift_out},
                 {"z_in", sol.dr.z_in}, {"z_out", sol.dr.z_out}};
  }
  return out;
}

uc::UcSolution schedule_from_json(const json& doc, const Bundle& b) {
  using detail::require;
  uc::UcSolution sol;
  const auto& gens = detail::require_array(doc, "generators", "solution.schedule");
  if (gens.size() != b.grid.num_generators()) throw DimensionError("solution file: generator count differs from grid");
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].at("id").get<std::string>() != b.grid.generators[g].id) throw DimensionError("solution file: generator order differs from grid");
    sol.u.push_back(gens[g].at("u").get<std::vector<int>>());
    sol.p.push_back(gens[g].at("p").get<std::vector<double>>());
    sol.cst.push_back(gens[g].at("cst").get<std::vector<double>>());
    sol.csh.push_back(gens[g].at("csh").get<std::vector<double>>());
  }
  for (const auto& c : detail::require_array(doc, "ibrs", "solution.schedule")) sol.pc.push_back(c.at("p").get<std::vector<double>>());
  sol.eta = require(doc, "eta", "solution.schedule").get<std::vector<std::vector<double>>>();
  sol.demand = require(doc, "demand_after_dr", "solution.schedule").get<std::vector<double>>();
  sol.objective = detail::require_number(doc, "objective", "solution.schedule");
  sol.dr_enabled = doc.contains("dr");
  if (sol.dr_enabled) {
    const auto& d = doc.at("dr");
    sol.dr.curtail = d.at("curtail").get<std::vector<std::vector<double>>>();
    sol.dr.shift_in = d.at("shift_in").get<std::vector<double>>();
    sol.dr.shift_out = d.at("shift_out").get<std::vector<double>>();
    sol.dr.z_in = d.at("z_in").get<std::vector<int>>();
    sol.dr.z_out = d.at("z_out").get<std::vector<int>>();
  } else {
    sol.dr = dr::DrDecisions::zero(0, b.inputs.periods());
  }
  sol.costs = uc::recompute_costs(b.grid, b.inputs, b.dr_spec, sol);
  return sol;
}

}  // namespace

int exit_code(solver::SolveStatus s, bool has_solution) {
  switch (s) {
    case solver::SolveStatus::kOptimal:
    case solver::SolveStatus::kGapLimit: return 0;
    case solver::SolveStatus::kLimit: return has_solution ? 3 : 4;
    case solver::SolveStatus::kInfeasible:
    case solver::SolveStatus::kUnbounded: return 2;
  }
  return 1;
}

json bundle_to_json(const Bundle& b) {
  json doc;
  doc["format"] = "sccuc-solution-1";
  doc["label"] = b.label;
  doc["status"] = solver::to_string(b.status);
  doc["objective"] = b.solution ? json(b.objective) : json(nullptr);
  doc["best_bound"] = std::isfinite(b.best_bound) ? json(b.best_bound) : json(nullptr);
  doc["nodes"] = b.nodes;
  doc["flags"] = {{"dr_enabled", b.flags.dr_enabled}, {"scc_enabled", b.flags.scc_enabled}, {"relax_eta", b.flags.relax_eta}};
  doc["scc_threshold_pu"] = b.scc_threshold;
  doc["grid"] = network::grid_to_json(b.grid);
  doc["series"] = uc::series_to_json(b.inputs, b.grid);
  doc["dr"] = b.dr_spec ? dr::dr_spec_to_json(*b.dr_spec) : json(nullptr);
  doc["surrogate"] = surrogate::surrogate_to_json(b.surrogate);
  doc["schedule"] = b.solution ? schedule_to_json(b) : json(nullptr);
  return doc;
}

Bundle bundle_from_json(const json& doc) {
  using namespace detail;
  if (doc.value("format", std::string{}) != "sccuc-solution-1") throw SchemaError("solution file: unsupported or missing 'format'");
  Bundle b;
  b.label = require_string(doc, "label", "solution");
  b.status = status_from_string(require_string(doc, "status", "solution"));
  const auto& bb = require(doc, "best_bound", "solution");
  b.best_bound = bb.is_null() ? -solver::kInf : bb.get<double>();
  b.nodes = require(doc, "nodes", "solution").get<std::size_t>();
  const auto& f = require(doc, "flags", "solution");
  b.flags.dr_enabled = f.at("dr_enabled").get<bool>();
  b.flags.scc_enabled = f.at("scc_enabled").get<bool>();
  b.flags.relax_eta = f.at("relax_eta").get<bool>();
  b.scc_threshold = require_number(doc, "scc_threshold_pu", "solution");
  b.grid = network::parse_grid(require(doc, "grid", "solution"));
  b.inputs = uc::parse_series(require(doc, "series", "solution"), b.grid);
  if (!require(doc, "dr", "solution").is_null()) b.dr_spec = dr::parse_dr_spec(doc.at("dr"), "solution.dr");
  b.surrogate = surrogate::surrogate_from_json(require(doc, "surrogate", "solution"));
  const auto& sched = require(doc, "schedule", "solution");
  if (!sched.is_null()) {
    b.solution = schedule_from_json(sched, b);
    b.objective = require_number(doc, "objective", "solution");
  }
  return b;
}

Bundle load_bundle(const fs::path& solution_file) {
  const fs::path file = fs::is_directory(solution_file) ? solution_file / "solution.json" : solution_file;
  return bundle_from_json(detail::read_json_file(file));
}

void write_bundle(const Bundle& b, const fs::path& path) { write_text(path, bundle_to_json(b).dump(1) + "\n"); }

Reports derive_reports(const Bundle& b) {
  if (!b.solution) throw Error("bundle '" + b.label + "' holds no solution");
  const auto& sol = *b.solution;
  Reports r;
  r.costs = analysis::cost_breakdown(sol, b.grid, b.inputs, b.dr_spec, b.label);
  r.surrogate_profile = analysis::scc_profile(sol, b.inputs, b.surrogate);
  r.oracle_profile = analysis::scc_profile(sol, b.grid, b.inputs);
  r.inadequate = analysis::inadequate_buses(r.surrogate_profile, b.scc_threshold);
  r.inadequate_oracle = analysis::inadequate_buses(r.oracle_profile, b.scc_threshold);
  r.baseline_average = mean(b.inputs.demand);
  r.demand_average = mean(sol.demand);
  for (const auto& cls : sol.dr.curtail) r.curtailment_total += std::accumulate(cls.begin(), cls.end(), 0.0);
  r.shift_total = std::accumulate(sol.dr.shift_in.begin(), sol.dr.shift_in.end(), 0.0);
  return r;
}

void write_reports(const Bundle& b, const Reports& r, const fs::path& dir) {
  json summary{{"label", b.label},
               {"status", solver::to_string(b.status)},
               {"objective", b.objective},
               {"operation_cost", r.costs.operation},
               {"consumer_payment", r.costs.payment},
               {"total_cost", r.costs.total},
               {"baseline_demand_average", r.baseline_average},
               {"demand_average", r.demand_average},
               {"curtailment_total", r.curtailment_total},
               {"shift_total", r.shift_total},
               {"scc_threshold_pu", b.scc_threshold},
               {"inadequate_buses", r.inadequate},
               {"inadequate_buses_oracle", r.inadequate_oracle},
               {"scc_minimum", analysis::profile_to_json(r.surrogate_profile)["minimum"]},
               {"scc_minimum_oracle", analysis::profile_to_json(r.oracle_profile)["minimum"]}};
  write_text(dir / "summary.json", summary.dump(1) + "\n");
  analysis::write_costs_csv({r.costs}, dir / "costs.csv");
  analysis::write_profile_csv(r.surrogate_profile, dir / "scc_profile.csv");
  analysis::write_profile_csv(r.oracle_profile, dir / "scc_profile_oracle.csv");
}

surrogate::SccSurrogate train_surrogate(const network::GridModel& grid, const SurrogateSource& src, std::uint64_t seed,
                                        const fs::path& dir) {
  const auto strategy = src.exhaustive ? surrogate::SamplingStrategy::exhaustive()
                                       : surrogate::SamplingStrategy::random(src.samples, seed);
  auto samples = surrogate::generate_samples(grid, strategy, src.alpha_grid);
  std::vector<surrogate::SccSample> train, holdout;
  if (src.holdout_fraction > 0.0) {
    std::tie(train, holdout) = surrogate::split_samples(std::move(samples), 1.0 - src.holdout_fraction, seed);
  } else {
    train = std::move(samples);
  }
  auto s = surrogate::fit_surrogate(grid, train);
  if (src.conservative_shift) s.enable_conservative_shift();
  const auto report = surrogate::validation_report(s, holdout.empty() ? train : holdout);
  fs::create_directories(dir);
  surrogate::save_surrogate(s, dir / "surrogate.json");
  surrogate::write_scatter_csv(report, dir / "surrogate_scatter.csv");
  surrogate::write_diagnostics_csv(s.bus_ids, report.per_bus, dir / "surrogate_diagnostics.csv");
  return s;
}

RunResult run_scenario(const ScenarioConfig& config) {
  RunResult out;
  out.dir = config.output_dir;
  stage("output", [&] { fs::create_directories(out.dir); });
  Bundle& b = out.bundle;
  b.label = config.label;
  b.flags = config.flags;
  b.grid = stage("grid", [&] { return network::load_grid(config.grid_path); });
  b.inputs = stage("series", [&] {
    auto s = uc::load_series(config.series_path, b.grid);
    return config.periods ? s.truncated(*config.periods) : s;
  });
  if (config.flags.dr_enabled) b.dr_spec = config.dr;
  b.scc_threshold = config.scc_threshold.value_or(b.grid.scc_threshold);
  b.surrogate = stage("surrogate", [&] {
    if (config.surrogate.mode == SurrogateSource::Mode::kLoad) {
      auto s = surrogate::load_surrogate(config.surrogate.path);
      s.check_matches(b.grid);
      return s;
    }
    return train_surrogate(b.grid, config.surrogate, config.seed, out.dir);
  });
  auto model = stage("build", [&] {
    auto m = uc::build_uc_milp(b.grid, b.inputs, b.dr_spec, config.flags);
    if (config.flags.scc_enabled) uc::add_scc_constraints(m, b.surrogate, b.scc_threshold, config.flags.relax_eta);
    return m;
  });
  out.solve = stage("solve", [&] { return solver::solve_milp(model.problem, config.solve); });
  b.status = out.solve.status;
  b.best_bound = out.solve.best_bound;
  b.nodes = out.solve.nodes;
  if (out.solve.has_solution()) {
    b.solution = stage("extract", [&] { return uc::extract_solution(model, out.solve.x); });
    b.objective = b.solution->objective;
  }
  stage("write", [&] {
    write_bundle(b, out.dir / "solution.json");
    std::ostringstream log;
    log << "# status " << solver::to_string(out.solve.status) << "\n";
    log << "# nodes " << out.solve.nodes << "\n";
    log << "# lp_iterations " << out.solve.lp_iterations << "\n";
    log << "# wall_time_s " << out.solve.wall_time << "\n";
    log << "# node incumbent bound gap\n" << solver::format_log(out.solve.log);
    write_text(out.dir / "solver.log", log.str());
  });
  if (b.solution) {
    // Reports come from the file just written, so they carry no hidden state.
    const Bundle reread = stage("report", [&] { return load_bundle(out.dir / "solution.json"); });
    out.reports = stage("report", [&] { return derive_reports(reread); });
    stage("report", [&] { write_reports(reread, *out.reports, out.dir); });
  } else {
    stage("write", [&] {
      json summary{{"label", b.label}, {"status", solver::to_string(b.status)}};
      write_text(out.dir / "summary.json", summary.dump(1) + "\n");
    });
  }
  return out;
}

std::string compare_scenarios(const std::vector<Bundle>& bundles) {
  if (bundles.size() < 2) throw std::invalid_argument("compare needs at least two bundles");
  const json grid0 = network::grid_to_json(bundles.front().grid);
  for (const auto& b : bundles) {
    if (network::grid_to_json(b.grid) != grid0) throw DimensionError("bundle '" + b.label + "' uses a different grid");
  }
  std::vector<Reports> reps;
  for (const auto& b : bundles) reps.push_back(derive_reports(b));

  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
    return s;
  };
  auto set_delta = [&](const std::vector<int>& base, const std::vector<int>& other) {
    std::vector<int> added, removed;
    std::set_difference(other.begin(), other.end(), base.begin(), base.end(), std::back_inserter(added));
    std::set_difference(base.begin(), base.end(), other.begin(), other.end(), std::back_inserter(removed));
    return "+" + list(added) + "/-" + list(removed);
  };
  struct Metric {
    std::string name;
    double (*get)(const Reports&);
  };
  const std::vector<Metric> metrics{
      {"total_cost", [](const Reports& r) { return r.costs.total; }},
      {"operation_cost", [](const Reports& r) { return r.costs.operation; }},
      {"consumer_payment", [](const Reports& r) { return r.costs.payment; }},
      {"baseline_demand_average", [](const Reports& r) { return r.baseline_average; }},
      {"demand_average", [](const Reports& r) { return r.demand_average; }},
      {"curtailment_total", [](const Reports& r) { return r.curtailment_total; }},
      {"shift_total", [](const Reports& r) { return r.shift_total; }},
      {"inadequate_count", [](const Reports& r) { return static_cast<double>(r.inadequate.size()); }},
  };
  std::ostringstream out;
  out << "metric";
  for (const auto& b : bundles) out << "," << b.label;
  for (std::size_t i = 1; i < bundles.size(); ++i) out << ",delta_" << bundles[i].label;
  out << "\n";
  for (const auto& m : metrics) {
    out << m.name;
    for (const auto& r : reps) out << "," << g17(m.get(r));
    for (std::size_t i = 1; i < reps.size(); ++i) out << "," << g17(m.get(reps[i]) - m.get(reps[0]));
    out << "\n";
  }
  out << "inadequate_buses";
  for (const auto& r : reps) out << "," << list(r.inadequate);
  for (std::size_t i = 1; i < reps.size(); ++i) out << "," << set_delta(reps[0].inadequate, reps[i].inadequate);
  out << "\n";
  return out.str();
}

}  // namespace sccuc::scenario
