#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sccuc/dr/dr.hpp"
#include "sccuc/network/grid.hpp"
#include "sccuc/solver/milp_problem.hpp"
#include "sccuc/surrogate/surrogate.hpp"
#include "sccuc/uc/series.hpp"

namespace sccuc::uc {

struct UcFlags {
  bool dr_enabled = false;
  bool scc_enabled = false;
  // Pair products as continuous [0,1] columns (exact once u is binary).
  bool relax_eta = true;
};

/// Assembled dispatch MILP plus the column map needed to read solutions.
struct UcModel {
  solver::MilpProblem problem;
  network::GridModel grid;
  TimeSeriesInputs inputs;
  std::optional<dr::DrSpec> dr_spec;

  // [unit][period] / [ibr][period]
  std::vector<std::vector<int>> u, p, cst, csh, pc;
  std::optional<dr::DrBlock> dr;
  // Filled by add_scc_constraints: [pair][period] and one row per bus/period.
  std::vector<std::vector<int>> eta;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<int>> scc_rows;  // [bus][period]
  double scc_threshold = 0.0;

  std::size_t periods() const { return inputs.periods(); }
};

/// Unit commitment with optional DR block:
///
///   min sum_t [ sum_g (c_nl u + c_m P + C_st + C_sh) + C_E,t ]
///   sum_g P_g,t + sum_c P_c,t = post-DR demand_t
///   u P_min <= P <= u P_max
///   C_st >= K_st (u_t - u_t-1),  C_sh >= K_sh (u_t-1 - u_t),  both >= 0
///   0 <= P_c,t <= alpha_c,t P_max,c          (column bound)
///
/// with u_g,-1 taken from the grid. Without DR the payment sum lambda D is a
/// constant kept in the objective offset. Throws DimensionError on a horizon
/// mismatch and std::invalid_argument when DR is enabled without a spec.
UcModel build_uc_milp(const network::GridModel& grid, const TimeSeriesInputs& inputs,
                      const std::optional<dr::DrSpec>& spec, const UcFlags& flags);

/// Adds, per bus b and period t,
///   sum_g k_bg u + sum_m k_bm eta_m >= threshold - sum_c k_bc alpha_c,t (+ shift)
/// and the McCormick rows eta <= u1, eta <= u2, eta >= u1 + u2 - 1.
void add_scc_constraints(UcModel& model, const surrogate::SccSurrogate& s, double threshold, bool relax_eta);

struct UcCosts {
  double operation = 0.0;  // no-load + marginal + start-up + shut-down
  double no_load = 0.0;
  double marginal = 0.0;
  double startup = 0.0;
  double shutdown = 0.0;
  double payment = 0.0;
  double total = 0.0;
};

struct UcSolution {
  std::vector<std::vector<int>> u;
  std::vector<std::vector<double>> p, cst, csh, pc;
  std::vector<std::vector<double>> eta;  // empty without SCC rows
  dr::DrDecisions dr;                    // zero decisions when DR is off
  bool dr_enabled = false;
  std::vector<double> demand;            // post-DR
  double objective = 0.0;                // solver objective
  UcCosts costs;                         // recomputed from the decisions
};

/// Reads x through the column map and recomputes every cost component from
/// the decisions. Throws ConsistencyError when the recomputed total differs
/// from the objective of x by more than `rel_tol` (relative).
UcSolution extract_solution(const UcModel& model, std::span<const double> x, double rel_tol = 1e-6);

/// Costs of a typed solution, computed without the MILP.
UcCosts recompute_costs(const network::GridModel& grid, const TimeSeriesInputs& inputs,
                        const std::optional<dr::DrSpec>& spec, const UcSolution& sol);

}  // namespace sccuc::uc
