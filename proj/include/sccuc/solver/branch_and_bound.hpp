#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sccuc/solver/milp_problem.hpp"

namespace sccuc::solver {

enum class SolveStatus { kOptimal, kGapLimit, kInfeasible, kUnbounded, kLimit };

std::string to_string(SolveStatus s);

enum class BranchingRule {
  kMostFractional,   // ties go to the lowest column index
  kFirstFractional,  // lowest fractional column index
};

enum class NodeSelection {
  // Best bound first; before the first incumbent the search dives along the
  // down branches.
  kBestBound,
  kDepthFirst,
};

struct SolveOptions {
  double relative_gap = 1e-6;
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  std::size_t node_limit = 1'000'000;
  double time_limit = 3600.0;  // seconds
  BranchingRule branching = BranchingRule::kMostFractional;
  NodeSelection node_selection = NodeSelection::kBestBound;
  // The search is serial either way; with the flag set the time limit is
  // ignored so that the node sequence depends on the input alone.
  bool deterministic = true;
};

/// Throws std::invalid_argument when a tolerance or limit is out of range.
void validate(const SolveOptions& o);

struct NodeLogEntry {
  std::size_t node = 0;
  double incumbent = kInf;  // +inf until the first incumbent
  double bound = -kInf;
  double gap = kInf;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> x;
  double objective = kInf;
  double best_bound = -kInf;
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
  double wall_time = 0.0;
  std::vector<NodeLogEntry> log;

  bool has_solution() const { return !x.empty(); }
};

/// (incumbent - bound) / max(1, |incumbent|)
double relative_gap(double incumbent, double bound);

/// LP-based branch-and-bound. Every incumbent is polished by re-solving the
/// LP with the integer columns fixed at their rounded values.
///
/// Status: optimal when the tree was exhausted, gap-limit when the search
/// stopped because the relative gap fell below the tolerance, limit when a
/// node or time limit fired (x holds the best incumbent, if any).
SolveResult solve_milp(const MilpProblem& problem, const SolveOptions& options = {});

/// One "node incumbent bound gap" line per log entry.
std::string format_log(const std::vector<NodeLogEntry>& log);

}  // namespace sccuc::solver
