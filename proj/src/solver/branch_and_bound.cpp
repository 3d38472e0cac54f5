#include "sccuc/solver/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "sccuc/solver/simplex.hpp"

namespace sccuc::solver {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kGapLimit: return "gap-limit";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kLimit: return "limit";
  }
  return "unknown";
}

void validate(const SolveOptions& o) {
  if (!(o.relative_gap > 0.0) || !(o.feasibility_tol > 0.0) || !(o.integrality_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  if (o.node_limit < 1 || !(o.time_limit > 0.0)) throw std::invalid_argument("solver limits must be at least 1");
}

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return kInf;
  if (!std::isfinite(bound)) return kInf;
  return std::max(0.0, incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

std::string format_log(const std::vector<NodeLogEntry>& log) {
  std::string out;
  char buf[128];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof buf, "%zu %.10g %.10g %.6g\n", e.node, e.incumbent, e.bound, e.gap);
    out += buf;
  }
  return out;
}

namespace {

struct BoundChange {
  int col;
  double lb;
  double ub;
};

struct Node {
  std::vector<BoundChange> changes;  // along the path from the root
  SimplexBasis basis;                // parent's final basis
  double bound = -kInf;              // parent's LP value
  std::size_t depth = 0;
};

class Search {
 public:
  Search(const MilpProblem& p, const SolveOptions& o)
      : p_(p), o_(o), lp_(p, LpOptions{o.feasibility_tol, 1e-9, 0, 64}) {
    for (std::size_t j = 0; j < p.num_cols(); ++j) {
      const auto& v = p.variable(j);
      if (!v.integer) continue;
      if (!std::isfinite(v.lb) || !std::isfinite(v.ub)) {
        throw std::invalid_argument("integer column " + v.name + " needs finite bounds");
      }
      int_cols_.push_back(static_cast<int>(j));
    }
  }

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    SolveResult res;
    push(Node{});
    bool hit_limit = false;
    bool unbounded = false;

    while (!open_.empty()) {
      if (by_bound_.begin()->first >= cutoff()) {
        // Every open node is dominated by the incumbent.
        open_.clear();
        by_bound_.clear();
        break;
      }
      const double bound = global_bound();
      if (std::isfinite(incumbent_) && relative_gap(incumbent_, bound) <= o_.relative_gap) break;
      if (res.nodes >= o_.node_limit || (!o_.deterministic && elapsed() > o_.time_limit)) {
        hit_limit = true;
        break;
      }
      Node node = pop();
      ++res.nodes;
      if (node.bound >= cutoff()) {
        log(res, node);
        continue;
      }
      lp_.restore_bounds();
      for (const auto& c : node.changes) lp_.set_column_bounds(static_cast<std::size_t>(c.col), c.lb, c.ub);
      LpResult lp = lp_.solve(node.basis.empty() ? nullptr : &node.basis);
      if (lp.status == LpStatus::kIterationLimit || lp.status == LpStatus::kNumericalFailure) {
        lp = lp_.solve(nullptr);
      }
      res.lp_iterations += lp.iterations;
      if (lp.status == LpStatus::kUnbounded) {
        if (node.changes.empty()) {
          unbounded = true;
          break;
        }
        // Bounded integers cannot make a child unbounded when the root was not.
        lost_bound_ = std::min(lost_bound_, node.bound);
        log(res, node);
        continue;
      }
      if (lp.status == LpStatus::kInfeasible) {
        log(res, node);
        continue;
      }
      if (lp.status != LpStatus::kOptimal) {
        // Keep the bound honest: the unexplored subtree may hold anything
        // down to the parent's value.
        lost_bound_ = std::min(lost_bound_, node.bound);
        log(res, node);
        continue;
      }
      const double value = std::max(lp.objective, node.bound);
      if (value >= cutoff()) {
        log(res, node);
        continue;
      }
      const int branch_col = select_branch(lp.x);
      if (branch_col < 0) {
        try_incumbent(node, lp);
        log(res, node);
        continue;
      }
      SimplexBasis basis = lp_.basis();
      const double v = lp.x[static_cast<std::size_t>(branch_col)];
      const auto& var = p_.variable(static_cast<std::size_t>(branch_col));
      double lo = var.lb, hi = var.ub;
      for (const auto& c : node.changes) {
        if (c.col == branch_col) {
          lo = c.lb;
          hi = c.ub;
        }
      }
      Node down{node.changes, basis, value, node.depth + 1};
      down.changes.push_back({branch_col, lo, std::floor(v)});
      Node up{std::move(node.changes), std::move(basis), value, node.depth + 1};
      up.changes.push_back({branch_col, std::ceil(v), hi});
      dive_ = push(std::move(down));
      push(std::move(up));
      log(res, node);
    }

    res.wall_time = elapsed();
    res.best_bound = open_.empty() ? std::min(lost_bound_, incumbent_) : global_bound();
    if (unbounded) {
      res.status = SolveStatus::kUnbounded;
      res.best_bound = -kInf;
      return res;
    }
    if (std::isfinite(incumbent_)) {
      res.x = best_x_;
      res.objective = incumbent_;
      if (hit_limit) {
        res.status = SolveStatus::kLimit;
      } else if (open_.empty() && lost_bound_ == kInf) {
        res.status = SolveStatus::kOptimal;
        res.best_bound = std::min(res.best_bound, incumbent_);
      } else {
        res.status = relative_gap(incumbent_, res.best_bound) <= o_.relative_gap ? SolveStatus::kGapLimit
                                                                                 : SolveStatus::kLimit;
      }
      return res;
    }
    res.status = hit_limit || lost_bound_ < kInf ? SolveStatus::kLimit : SolveStatus::kInfeasible;
    return res;
  }

 private:
  // Nodes whose bound reaches this value cannot improve the incumbent.
  double cutoff() const {
    if (!std::isfinite(incumbent_)) return kInf;
    return incumbent_ - 1e-9 * std::max(1.0, std::abs(incumbent_));
  }

  double global_bound() const {
    double b = lost_bound_;
    if (!by_bound_.empty()) b = std::min(b, by_bound_.begin()->first);
    return std::min(b, incumbent_);
  }

  std::size_t push(Node n) {
    const std::size_t id = next_id_++;
    by_bound_.emplace(n.bound, id);
    open_.emplace(id, std::move(n));
    return id;
  }

  Node pop() {
    std::size_t id;
    const bool diving = o_.node_selection == NodeSelection::kDepthFirst || !std::isfinite(incumbent_);
    if (diving) {
      id = open_.count(dive_) ? dive_ : open_.rbegin()->first;
    } else {
      id = by_bound_.begin()->second;
    }
    auto it = open_.find(id);
    Node n = std::move(it->second);
    by_bound_.erase({n.bound, id});
    open_.erase(it);
    return n;
  }

  int select_branch(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = 0.0;
    for (int j : int_cols_) {
      const double v = x[static_cast<std::size_t>(j)];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac <= o_.integrality_tol) continue;
      if (o_.branching == BranchingRule::kFirstFractional) return j;
      if (frac > best_frac) {
        best_frac = frac;
        best = j;
      }
    }
    return best;
  }

  void try_incumbent(const Node& node, const LpResult& lp) {
    std::vector<double> x = lp.x;
    for (int j : int_cols_) x[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
    // Polish the continuous part with the integers pinned.
    lp_.restore_bounds();
    for (const auto& c : node.changes) lp_.set_column_bounds(static_cast<std::size_t>(c.col), c.lb, c.ub);
    for (int j : int_cols_) lp_.set_column_bounds(static_cast<std::size_t>(j), x[static_cast<std::size_t>(j)], x[static_cast<std::size_t>(j)]);
    SimplexBasis basis = lp_.basis();
    LpResult fixed = lp_.solve(&basis);
    if (fixed.status == LpStatus::kOptimal) {
      x = fixed.x;
      for (int j : int_cols_) x[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
    }
    if (p_.max_violation(x) > 10.0 * o_.feasibility_tol) return;
    const double obj = p_.objective_value(x);
    if (obj < incumbent_) {
      incumbent_ = obj;
      best_x_ = std::move(x);
    }
  }

  void log(SolveResult& res, const Node&) {
    const double b = global_bound();
    res.log.push_back({res.nodes, incumbent_, b, relative_gap(incumbent_, b)});
  }

  const MilpProblem& p_;
  SolveOptions o_;
  SimplexSolver lp_;
  std::vector<int> int_cols_;

  std::map<std::size_t, Node> open_;
  std::set<std::pair<double, std::size_t>> by_bound_;
  std::size_t next_id_ = 0;
  std::size_t dive_ = 0;

  double incumbent_ = kInf;
  std::vector<double> best_x_;
  double lost_bound_ = kInf;
};

}  // namespace

SolveResult solve_milp(const MilpProblem& problem, const SolveOptions& options) {
  validate(options);
  Search s(problem, options);
  return s.run();
}

}  // namespace sccuc::solver
