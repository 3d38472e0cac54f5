#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sccuc/solver/milp_problem.hpp"

namespace sccuc::solver {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

std::string to_string(LpStatus s);

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  // 0 selects a limit from the problem size.
  std::size_t iteration_limit = 0;
  int refactor_interval = 64;
};

struct LpResult {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0.0;  // includes the problem's objective offset
  std::vector<double> x;
  std::vector<double> row_activity;
  std::vector<double> duals;          // one per row
  std::vector<double> reduced_costs;  // one per column, c - A'y
  // Improving direction of the structural columns when unbounded.
  std::vector<double> ray;
  std::size_t iterations = 0;
};

/// Variable status in a simplex basis (structural columns first, then one
/// logical per row).
enum class VarStatus : std::int8_t { kBasic, kLower, kUpper, kFree };

struct SimplexBasis {
  std::vector<VarStatus> status;
  std::vector<int> head;
  bool empty() const { return head.empty(); }
};

/// Bounded-variable revised simplex over a MilpProblem with integrality
/// dropped. Rows are turned into equalities with one bounded logical each;
/// the solver keeps the model scaled internally and reports everything in
/// the original units.
///
/// Cold starts use the dual simplex when the slack basis is dual feasible
/// after bound flips and the primal simplex (composite phase 1) otherwise.
/// Warm starts from a previous basis go through the dual simplex, which is
/// what branch-and-bound needs after a bound change.
class SimplexSolver {
 public:
  explicit SimplexSolver(const MilpProblem& problem, LpOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  void set_column_bounds(std::size_t col, double lb, double ub);
  void restore_bounds();
  double column_lb(std::size_t col) const;
  double column_ub(std::size_t col) const;

  LpResult solve(const SimplexBasis* warm = nullptr);
  /// Basis at the end of the last solve.
  SimplexBasis basis() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LpResult solve_lp(const MilpProblem& problem, const LpOptions& options = {});

}  // namespace sccuc::solver
