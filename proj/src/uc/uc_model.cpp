#include "sccuc/uc/uc_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sccuc/error.hpp"

namespace sccuc::uc {

using solver::Sense;
using solver::Term;

namespace {

std::string tag(std::size_t a, std::size_t t) { return std::to_string(a) + "_t" + std::to_string(t); }

}  // namespace

UcModel build_uc_milp(const network::GridModel& grid, const TimeSeriesInputs& inputs,
                      const std::optional<dr::DrSpec>& spec, const UcFlags& flags) {
  inputs.validate(grid);
  if (flags.dr_enabled && !spec) throw std::invalid_argument("DR enabled but no DR spec given");
  UcModel m;
  m.grid = grid;
  m.inputs = inputs;
  if (flags.dr_enabled) m.dr_spec = spec;
  auto& p = m.problem;
  p.name = flags.dr_enabled ? "uc_dr" : "uc";

  const std::size_t G = grid.num_generators(), C = grid.num_ibrs(), T = inputs.periods();
  const int nT = static_cast<int>(T);
  m.u.resize(G);
  m.p.resize(G);
  m.cst.resize(G);
  m.csh.resize(G);
  m.pc.resize(C);
  // Column order: commitments first so the integer block is contiguous.
  for (std::size_t g = 0; g < G; ++g) {
    for (int t = 0; t < nT; ++t) m.u[g].push_back(p.add_variable({"u", static_cast<int>(g), t}, 0.0, 1.0, true, grid.generators[g].c_nl));
  }
  for (std::size_t g = 0; g < G; ++g) {
    const auto& gen = grid.generators[g];
    for (int t = 0; t < nT; ++t) {
      m.p[g].push_back(p.add_variable({"p", static_cast<int>(g), t}, 0.0, gen.p_max, false, gen.c_m));
      m.cst[g].push_back(p.add_variable({"cst", static_cast<int>(g), t}, 0.0, solver::kInf, false, 1.0));
      m.csh[g].push_back(p.add_variable({"csh", static_cast<int>(g), t}, 0.0, solver::kInf, false, 1.0));
    }
  }
  for (std::size_t c = 0; c < C; ++c) {
    for (int t = 0; t < nT; ++t) {
      const double cap = inputs.alpha[c][static_cast<std::size_t>(t)] * grid.ibrs[c].p_max;
      m.pc[c].push_back(p.add_variable({"pc", static_cast<int>(c), t}, 0.0, cap, false, 0.0));
    }
  }
  if (flags.dr_enabled) {
    m.dr = dr::build_dr_block(p, *spec, inputs.demand);
    dr::add_payment_objective(p, *m.dr, *spec, inputs.demand, inputs.price);
  } else {
    for (std::size_t t = 0; t < T; ++t) p.add_objective_offset(inputs.price[t] * inputs.demand[t]);
  }

  for (std::size_t t = 0; t < T; ++t) {
    std::vector<Term> bal;
    for (std::size_t g = 0; g < G; ++g) bal.push_back({m.p[g][t], 1.0});
    for (std::size_t c = 0; c < C; ++c) bal.push_back({m.pc[c][t], 1.0});
    if (m.dr) {
      for (const auto& cls : m.dr->curtail) bal.push_back({cls[t], 1.0});
      bal.push_back({m.dr->shift_in[t], -1.0});
      bal.push_back({m.dr->shift_out[t], 1.0});
    }
    p.add_constraint("balance_t" + std::to_string(t), std::move(bal), Sense::kEq, inputs.demand[t]);
  }
  for (std::size_t g = 0; g < G; ++g) {
    const auto& gen = grid.generators[g];
    for (std::size_t t = 0; t < T; ++t) {
      p.add_constraint("pmax_" + tag(g, t), {{m.p[g][t], 1.0}, {m.u[g][t], -gen.p_max}}, Sense::kLe, 0.0);
      p.add_constraint("pmin_" + tag(g, t), {{m.p[g][t], 1.0}, {m.u[g][t], -gen.p_min}}, Sense::kGe, 0.0);
    }
  }
  for (std::size_t g = 0; g < G; ++g) {
    const auto& gen = grid.generators[g];
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<Term> st{{m.cst[g][t], 1.0}, {m.u[g][t], -gen.k_st}};
      std::vector<Term> sh{{m.csh[g][t], 1.0}, {m.u[g][t], gen.k_sh}};
      double st_rhs = 0.0, sh_rhs = 0.0;
      if (t == 0) {
        st_rhs = -gen.k_st * gen.u0;
        sh_rhs = gen.k_sh * gen.u0;
      } else {
        st.push_back({m.u[g][t - 1], gen.k_st});
        sh.push_back({m.u[g][t - 1], -gen.k_sh});
      }
      p.add_constraint("startup_" + tag(g, t), std::move(st), Sense::kGe, st_rhs);
      p.add_constraint("shutdown_" + tag(g, t), std::move(sh), Sense::kGe, sh_rhs);
    }
  }
  return m;
}

void add_scc_constraints(UcModel& model, const surrogate::SccSurrogate& s, double threshold, bool relax_eta) {
  s.check_matches(model.grid);
  if (!model.eta.empty()) throw std::logic_error("SCC constraints already added");
  auto& p = model.problem;
  const std::size_t T = model.periods();
  const int nT = static_cast<int>(T);
  model.pairs = s.pairs;
  model.scc_threshold = threshold;
  model.eta.resize(s.num_pairs());
  for (std::size_t k = 0; k < s.num_pairs(); ++k) {
    for (int t = 0; t < nT; ++t) {
      model.eta[k].push_back(p.add_variable({"eta", static_cast<int>(k), t}, 0.0, 1.0, !relax_eta, 0.0));
    }
  }
  for (std::size_t k = 0; k < s.num_pairs(); ++k) {
    const auto [g1, g2] = s.pairs[k];
    for (std::size_t t = 0; t < T; ++t) {
      const int e = model.eta[k][t], u1 = model.u[g1][t], u2 = model.u[g2][t];
      p.add_constraint("mc_a_" + tag(k, t), {{e, 1.0}, {u1, -1.0}}, Sense::kLe, 0.0);
      p.add_constraint("mc_b_" + tag(k, t), {{e, 1.0}, {u2, -1.0}}, Sense::kLe, 0.0);
      p.add_constraint("mc_c_" + tag(k, t), {{e, 1.0}, {u1, -1.0}, {u2, -1.0}}, Sense::kGe, -1.0);
    }
  }
  model.scc_rows.assign(s.num_buses(), {});
  for (std::size_t b = 0; b < s.num_buses(); ++b) {
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<Term> row;
      for (std::size_t g = 0; g < s.num_generators(); ++g) row.push_back({model.u[g][t], s.k_g[b][g]});
      for (std::size_t k = 0; k < s.num_pairs(); ++k) row.push_back({model.eta[k][t], s.k_m[b][k]});
      double rhs = threshold;
      for (std::size_t c = 0; c < s.num_ibrs(); ++c) rhs -= s.k_c[b][c] * model.inputs.alpha[c][t];
      if (s.shift_enabled) rhs += s.conservative_shift[b];
      model.scc_rows[b].push_back(p.add_constraint("scc_b" + std::to_string(s.bus_ids[b]) + "_t" + std::to_string(t),
                                                   std::move(row), Sense::kGe, rhs));
    }
  }
}

UcCosts recompute_costs(const network::GridModel& grid, const TimeSeriesInputs& inputs,
                        const std::optional<dr::DrSpec>& spec, const UcSolution& sol) {
  UcCosts c;
  const std::size_t T = inputs.periods();
  for (std::size_t g = 0; g < grid.num_generators(); ++g) {
    const auto& gen = grid.generators[g];
    int prev = gen.u0;
    for (std::size_t t = 0; t < T; ++t) {
      const int u = sol.u[g][t];
      c.no_load += gen.c_nl * u;
      c.marginal += gen.c_m * sol.p[g][t];
      c.startup += gen.k_st * std::max(0, u - prev);
      c.shutdown += gen.k_sh * std::max(0, prev - u);
      prev = u;
    }
  }
  c.operation = c.no_load + c.marginal + c.startup + c.shutdown;
  if (sol.dr_enabled) {
    if (!spec) throw std::invalid_argument("DR solution without a DR spec");
    c.payment = dr::consumer_payment(inputs.demand, sol.dr, inputs.price, *spec).total;
  } else {
    for (std::size_t t = 0; t < T; ++t) c.payment += inputs.price[t] * inputs.demand[t];
  }
  c.total = c.operation + c.payment;
  return c;
}

UcSolution extract_solution(const UcModel& model, std::span<const double> x, double rel_tol) {
  const auto& p = model.problem;
  if (x.size() != p.num_cols()) throw DimensionError("solution vector length differs from the column count");
  auto val = [&](int col) { return x[static_cast<std::size_t>(col)]; };
  auto read = [&](const std::vector<std::vector<int>>& cols) {
    std::vector<std::vector<double>> out(cols.size());
    for (std::size_t a = 0; a < cols.size(); ++a) {
      for (int col : cols[a]) out[a].push_back(val(col));
    }
    return out;
  };
  UcSolution sol;
  sol.u.resize(model.u.size());
  for (std::size_t g = 0; g < model.u.size(); ++g) {
    for (int col : model.u[g]) sol.u[g].push_back(static_cast<int>(std::lround(val(col))));
  }
  sol.p = read(model.p);
  sol.cst = read(model.cst);
  sol.csh = read(model.csh);
  sol.pc = read(model.pc);
  sol.eta = read(model.eta);
  sol.dr_enabled = model.dr.has_value();
  const std::size_t classes = model.dr_spec ? model.dr_spec->classes.size() : 0;
  sol.dr = model.dr ? dr::extract_decisions(*model.dr, x) : dr::DrDecisions::zero(classes, model.periods());
  sol.demand = dr::effective_demand(model.inputs.demand, sol.dr);
  sol.objective = p.objective_value(x);
  sol.costs = recompute_costs(model.grid, model.inputs, model.dr_spec, sol);
  const double diff = std::abs(sol.costs.total - sol.objective);
  if (diff > rel_tol * std::max(1.0, std::abs(sol.objective))) {
    throw ConsistencyError("recomputed total cost " + std::to_string(sol.costs.total) + " differs from objective " +
                           std::to_string(sol.objective));
  }
  return sol;
}

}  // namespace sccuc::uc
