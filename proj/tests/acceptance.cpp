// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "paths.hpp"
#include "random_lp.hpp"
#include "sccuc/analysis/analysis.hpp"
#include "sccuc/network/fault.hpp"
#include "sccuc/scenario/scenario.hpp"
#include "sccuc/solver/mps.hpp"
#include "sccuc/solver/simplex.hpp"
#include "tiny.hpp"

using namespace sccuc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

fs::path scenario_file(const std::string& name) { return fs::path(SCCUC_SCENARIO_DIR) / name; }

// The three 6-period fixture runs, shared by several criteria.
struct FixtureRuns {
  std::map<char, scenario::RunResult> run;
  std::map<char, double> seconds;
};

FixtureRuns& fixture() {
  static FixtureRuns f = [] {
    FixtureRuns r;
    for (char c : {'A', 'B', 'C'}) {
      auto cfg = scenario::load_config(scenario_file(std::string("ieee30_6h_case_") + c + ".json"));
      cfg.output_dir = test::scratch((std::string("accept_6h_") + c).c_str());
      const auto t0 = std::chrono::steady_clock::now();
      r.run.emplace(c, scenario::run_scenario(cfg));
      r.seconds[c] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return r;
  }();
  return f;
}

// 1. McCormick envelope rows of the fixture admit only eta = u1 u2.
Outcome mccormick() {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  const auto inputs = uc::load_series(test::data("series_6h.json"), grid);
  uc::UcFlags f;
  f.scc_enabled = true;
  auto m = uc::build_uc_milp(grid, inputs, std::nullopt, f);
  uc::add_scc_constraints(m, test::flat_surrogate(grid, 1.0), 5.0, true);

  std::map<int, std::vector<const solver::Constraint*>> envelope;  // eta column -> rows
  for (const auto& row : m.problem.constraints()) {
    if (row.name.rfind("mc_", 0) != 0) continue;
    for (const auto& t : row.terms)
      if (m.problem.variable(static_cast<std::size_t>(t.col)).key.kind == "eta") envelope[t.col].push_back(&row);
  }
  std::mt19937_64 rng(1);
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t pair = rng() % m.pairs.size();
    const std::size_t t = rng() % inputs.periods();
    const int u1 = static_cast<int>(rng() & 1U), u2 = static_cast<int>(rng() & 1U);
    const int eta = m.eta[pair][t];
    const int c1 = m.u[m.pairs[pair].first][t], c2 = m.u[m.pairs[pair].second][t];
    solver::MilpProblem q;
    q.add_variable({"u1", -1, -1}, u1, u1, false, 0.0);
    q.add_variable({"u2", -1, -1}, u2, u2, false, 0.0);
    q.add_variable({"eta", -1, -1}, 0.0, 1.0, false, 1.0);
    for (const auto* row : envelope[eta]) {
      std::vector<solver::Term> terms;
      for (const auto& tm : row->terms) terms.push_back({tm.col == c1 ? 0 : tm.col == c2 ? 1 : 2, tm.coef});
      q.add_constraint(row->name, terms, row->sense, row->rhs);
    }
    const double lo = solver::solve_lp(q).x[2];
    q.variable(2).obj = -1.0;
    const double hi = solver::solve_lp(q).x[2];
    const double want = u1 * u2;
    if (envelope[eta].size() != 3 || lo != want || hi != want) ++bad;
  }
  return {bad == 0, std::to_string(1000 - bad) + "/1000 assignments pin eta to u1*u2 exactly"};
}

// 2. Tiny UC with DR and SCC: MILP against enumeration of every commitment
//    (and every admissible shift-direction pattern) with one LP each.
Outcome brute_force() {
  const test::Tiny tiny;
  uc::UcFlags f;
  f.dr_enabled = f.scc_enabled = true;
  auto m = uc::build_uc_milp(tiny.grid, tiny.inputs, dr::DrSpec{}, f);
  uc::add_scc_constraints(m, tiny.surrogate, tiny.grid.scc_threshold, true);
  solver::SolveOptions o;
  o.relative_gap = 1e-9;
  const auto r = solver::solve_milp(m.problem, o);

  double best = solver::kInf;
  std::size_t lps = 0;
  const std::size_t T = tiny.inputs.periods();
  for (int mask = 0; mask < 64; ++mask) {
    auto q = m.problem;
    for (std::size_t g = 0; g < 2; ++g)
      for (std::size_t t = 0; t < T; ++t) {
        auto& v = q.variable(static_cast<std::size_t>(m.u[g][t]));
        v.lb = v.ub = (mask >> (g * T + t)) & 1;
      }
    for (int zs = 0; zs < 27; ++zs) {
      int code = zs;
      for (std::size_t t = 0; t < T; ++t, code /= 3) {
        auto& zi = q.variable(static_cast<std::size_t>(m.dr->z_in[t]));
        auto& zo = q.variable(static_cast<std::size_t>(m.dr->z_out[t]));
        zi.lb = zi.ub = code % 3 == 1;
        zo.lb = zo.ub = code % 3 == 2;
      }
      const auto lp = solver::solve_lp(q);
      ++lps;
      if (lp.status == solver::LpStatus::kOptimal) best = std::min(best, lp.objective);
    }
  }
  const double rel = std::abs(r.objective - best) / std::max(1.0, std::abs(best));
  std::ostringstream d;
  d << "MILP " << r.objective << " vs enumeration " << best << " over " << lps << " LPs, rel diff " << rel;
  return {r.status == solver::SolveStatus::kOptimal && rel <= 1e-6, d.str()};
}

// 3. Objective ordering across the fixture cases.
Outcome monotonicity() {
  auto& f = fixture();
  bool ok = true;
  std::ostringstream d;
  for (char c : {'A', 'B', 'C'}) {
    const auto& b = f.run.at(c).bundle;
    const bool solved = b.solution && (b.status == solver::SolveStatus::kOptimal || b.status == solver::SolveStatus::kGapLimit) &&
                        solver::relative_gap(b.objective, b.best_bound) <= 1e-3 + 1e-12;
    ok = ok && solved;
    d << c << "=" << std::fixed << std::setprecision(2) << b.objective << " (" << solver::to_string(b.status) << ", "
      << std::setprecision(1) << f.seconds[c] << " s) ";
  }
  if (!ok) return {false, d.str()};
  const double a = f.run.at('A').bundle.objective, b = f.run.at('B').bundle.objective, c = f.run.at('C').bundle.objective;
  d << "| B<=A " << (b <= a ? "yes" : "no") << ", C>=B " << (c >= b ? "yes" : "no");
  const double secs = f.seconds['A'] + f.seconds['B'] + f.seconds['C'];
  return {b <= a && c >= b && secs < 600.0, d.str()};
}

// 4. Constrained schedule clears the threshold everywhere.
Outcome scc_feasibility() {
  const auto& run = fixture().run.at('C');
  if (!run.reports) return {false, "case C has no solution"};
  const auto& prof = run.reports->surrogate_profile;
  const double thr = run.bundle.scc_threshold;
  double worst = solver::kInf;
  for (const auto& row : prof.values)
    for (double v : row) worst = std::min(worst, v);
  std::ostringstream d;
  d << "lowest surrogate SCC " << worst << " p.u. vs threshold " << thr << ", inadequate buses: "
    << run.reports->inadequate.size();
  return {worst >= thr - 1e-6 && run.reports->inadequate.empty(), d.str()};
}

// 5. DR without SCC constraints only adds inadequate buses.
Outcome degradation() {
  const auto& a = fixture().run.at('A');
  const auto& b = fixture().run.at('B');
  if (!a.reports || !b.reports) return {false, "missing solution"};
  const auto& la = a.reports->inadequate;
  const auto& lb = b.reports->inadequate;
  auto list = [](const std::vector<int>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
  };
  const bool superset = std::includes(lb.begin(), lb.end(), la.begin(), la.end());
  return {superset && !la.empty(), "no DR " + list(la) + ", DR " + list(lb)};
}

// 6. Exact recovery of a linear ground truth; fixture fit quality and scatter.
Outcome surrogate_training() {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  auto samples = surrogate::generate_samples(grid, surrogate::SamplingStrategy::random(3000, 11));
  const auto pairs = surrogate::generator_pairs(grid.num_generators());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(-1.0, 3.0);
  const std::size_t nf = 12 + 3 + pairs.size();
  std::vector<std::vector<double>> truth(grid.num_buses(), std::vector<double>(nf));
  for (auto& row : truth)
    for (auto& v : row) v = unif(rng);
  for (auto& s : samples) {
    const auto feat = surrogate::feature_row(s.commitment, s.alpha, pairs);
    for (std::size_t b = 0; b < grid.num_buses(); ++b) s.currents[b] = std::inner_product(feat.begin(), feat.end(), truth[b].begin(), 0.0);
  }
  const auto fit = surrogate::fit_surrogate(grid, samples);
  double err = 0.0;
  for (std::size_t b = 0; b < grid.num_buses(); ++b) {
    for (std::size_t j = 0; j < 12; ++j) err = std::max(err, std::abs(fit.k_g[b][j] - truth[b][j]));
    for (std::size_t j = 0; j < 3; ++j) err = std::max(err, std::abs(fit.k_c[b][j] - truth[b][12 + j]));
    for (std::size_t j = 0; j < pairs.size(); ++j) err = std::max(err, std::abs(fit.k_m[b][j] - truth[b][15 + j]));
  }

  const auto& run = fixture().run.at('C');
  double resid = 0.0;
  for (const auto& d : run.bundle.surrogate.diagnostics) resid = std::max(resid, d.normal_residual);
  std::ifstream scatter(run.dir / "surrogate_scatter.csv");
  std::string header, line;
  std::getline(scatter, header);
  std::size_t rows = 0, bus1 = 0;
  while (std::getline(scatter, line)) {
    ++rows;
    bus1 += line.rfind("1,", 0) == 0;
  }
  std::ostringstream d;
  d << "synthetic max coef error " << err << ", fixture normal residual " << resid << ", scatter rows " << rows
    << " (" << bus1 << " at bus 1)";
  return {err <= 1e-9 && resid <= 1e-8 && header == "bus,actual,approx" && bus1 > 0, d.str()};
}

// 7. Oracle monotone in every commitment bit and availability; Y Z = I.
Outcome oracle_properties() {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int bad = 0;
  double yz = 0.0;
  for (int k = 0; k < 500; ++k) {
    std::vector<int> u(12);
    std::vector<double> a(3);
    for (auto& v : u) v = unif(rng) < 0.5;
    for (auto& v : a) v = unif(rng);
    auto u2 = u;
    auto a2 = a;
    if (k % 2 == 0) {
      u[rng() % 12] = 0;
      u2 = u;
      u2[rng() % 12] = 1;
    } else {
      const std::size_t c = rng() % 3;
      a2[c] = a[c] + (1.0 - a[c]) * unif(rng);
    }
    const network::FaultAnalysis lo(grid, u), hi(grid, u2);
    const auto before = lo.currents(a);
    const auto after = hi.currents(a2);
    for (std::size_t b = 0; b < 30; ++b)
      if (after[b] < before[b] * (1.0 - 1e-12)) ++bad;
    if (hi.has_sync_source()) {
      yz = std::max(yz, (hi.admittance() * hi.impedance() - Eigen::MatrixXcd::Identity(30, 30)).cwiseAbs().maxCoeff());
    }
  }
  const std::vector<int> on(12, 1);
  const network::FaultAnalysis all(grid, on);
  yz = std::max(yz, (all.admittance() * all.impedance() - Eigen::MatrixXcd::Identity(30, 30)).cwiseAbs().maxCoeff());
  std::ostringstream d;
  d << "500 pairs x 30 buses, " << bad << " decreases; max |YZ - I| " << yz;
  return {bad == 0 && yz <= 1e-9, d.str()};
}

// 8. Random LPs against HiGHS through the MPS file; node log; DR conservation.
Outcome solver_contract() {
  const auto dir = test::scratch("accept_lp");
  std::vector<double> ours;
  std::string cmd = std::string("\"") + SCCUC_PYTHON + "\" \"" + SCCUC_MPS_ORACLE + "\"";
  int own_fail = 0;
  for (int k = 0; k < 50; ++k) {
    const auto p = test::random_problem(1000 + static_cast<std::uint64_t>(k));
    const auto r = solver::solve_lp(p);
    if (r.status != solver::LpStatus::kOptimal) ++own_fail;
    ours.push_back(r.objective);
    const auto path = dir / ("lp" + std::to_string(k) + ".mps");
    solver::write_mps(p, path);
    cmd += " \"" + path.string() + "\"";
  }
  std::map<std::string, std::pair<std::string, double>> theirs;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) {
      std::istringstream in(buf);
      std::string file, status, value;
      in >> file >> status >> value;
      theirs[fs::path(file).filename().string()] = {status, std::strtod(value.c_str(), nullptr)};
    }
    pclose(pipe);
  }
  double worst = 0.0;
  int matched = 0;
  for (int k = 0; k < 50; ++k) {
    const auto it = theirs.find("lp" + std::to_string(k) + ".mps");
    if (it == theirs.end() || it->second.first != "optimal") continue;
    const double rel = std::abs(ours[static_cast<std::size_t>(k)] - it->second.second) / std::max(1.0, std::abs(it->second.second));
    worst = std::max(worst, rel);
    matched += rel <= 1e-7;
  }

  std::size_t entries = 0, violations = 0;
  for (const auto& [c, run] : fixture().run) {
    for (const auto& e : run.solve.log) {
      ++entries;
      if (e.incumbent < e.bound - 1e-9 * std::max(1.0, std::abs(e.bound))) ++violations;
    }
  }
  double conservation = 0.0;
  for (char c : {'B', 'C'}) {
    const auto& sol = fixture().run.at(c).bundle.solution;
    if (!sol) return {false, "missing DR solution"};
    conservation = std::max(conservation, std::abs(total(sol->dr.shift_in) - total(sol->dr.shift_out)));
  }
  std::ostringstream d;
  d << matched << "/50 LPs agree with HiGHS (worst rel " << worst << ", own failures " << own_fail << "); "
    << violations << " of " << entries << " logged nodes with incumbent < bound; max |sum in - sum out| " << conservation;
  return {matched == 50 && own_fail == 0 && violations == 0 && entries > 0 && conservation <= 1e-9, d.str()};
}

// 9. Two deterministic CLI runs write byte-identical solution files.
Outcome determinism() {
  const auto cfg = scenario_file("ieee30_6h_case_C.json");
  std::vector<std::string> files;
  for (const char* tag : {"accept_det_1", "accept_det_2"}) {
    const auto out = test::scratch(tag);
    const std::string cmd = std::string("\"") + SCCUC_CLI + "\" solve --deterministic --config \"" + cfg.string() +
                            "\" --out \"" + out.string() + "\" > \"" + (out / "stdout.txt").string() + "\"";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) return {false, "solve exited with " + std::to_string(rc)};
    files.push_back(slurp(out / "solution.json"));
  }
  const std::string in_process = slurp(fixture().run.at('C').dir / "solution.json");
  const bool same = !files[0].empty() && files[0] == files[1];
  std::ostringstream d;
  d << "case C, " << files[0].size() << " bytes, CLI runs " << (same ? "identical" : "differ")
    << ", in-process run " << (files[0] == in_process ? "identical" : "differs");
  return {same && files[0] == in_process, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, mccormick}, {2, brute_force}, {3, monotonicity}, {4, scc_feasibility}, {5, degradation},
      {6, surrogate_training}, {7, oracle_properties}, {8, solver_contract}, {9, determinism}};
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s [%s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), fmt("%.2f s", secs).c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
