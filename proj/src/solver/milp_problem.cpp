#include "sccuc/solver/milp_problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sccuc/error.hpp"

namespace sccuc::solver {

std::string default_column_name(const VarKey& key) {
  std::string out = key.kind;
  if (key.index >= 0) out += "_" + std::to_string(key.index);
  if (key.period >= 0) out += "_t" + std::to_string(key.period);
  return out;
}

int MilpProblem::add_variable(VarKey key, double lb, double ub, bool integer, double obj) {
  if (!(lb <= ub)) throw Error("variable " + default_column_name(key) + " has lb > ub");
  const int col = static_cast<int>(vars_.size());
  if (!registry_.emplace(key, col).second) {
    throw Error("variable " + default_column_name(key) + " registered twice");
  }
  Variable v;
  v.name = default_column_name(key);
  v.key = std::move(key);
  v.lb = lb;
  v.ub = ub;
  v.integer = integer;
  v.obj = obj;
  vars_.push_back(std::move(v));
  return col;
}

int MilpProblem::add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
  for (const auto& t : terms) {
    if (t.col < 0 || static_cast<std::size_t>(t.col) >= vars_.size()) {
      throw Error("constraint " + name + " references undeclared column " + std::to_string(t.col));
    }
  }
  // Merge duplicate columns so every row holds each column at most once.
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.col < b.col; });
  std::vector<Term> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().col == t.col) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  rows_.push_back({std::move(name), std::move(merged), sense, rhs});
  return static_cast<int>(rows_.size() - 1);
}

std::size_t MilpProblem::num_integer() const {
  return static_cast<std::size_t>(std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) { return v.integer; }));
}

std::optional<int> MilpProblem::find(const VarKey& key) const {
  auto it = registry_.find(key);
  if (it == registry_.end()) return std::nullopt;
  return it->second;
}

int MilpProblem::column(const VarKey& key) const {
  auto it = registry_.find(key);
  if (it == registry_.end()) throw std::out_of_range("no column registered for " + default_column_name(key));
  return it->second;
}

double MilpProblem::objective_value(std::span<const double> x) const {
  double v = offset_;
  for (std::size_t j = 0; j < vars_.size(); ++j) v += vars_[j].obj * x[j];
  return v;
}

double MilpProblem::row_activity(std::size_t row, std::span<const double> x) const {
  double a = 0.0;
  for (const auto& t : rows_[row].terms) a += t.coef * x[static_cast<std::size_t>(t.col)];
  return a;
}

double MilpProblem::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max({worst, vars_[j].lb - x[j], x[j] - vars_[j].ub});
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double a = row_activity(i, x);
    const auto& r = rows_[i];
    if (r.sense != Sense::kGe) worst = std::max(worst, a - r.rhs);
    if (r.sense != Sense::kLe) worst = std::max(worst, r.rhs - a);
  }
  return worst;
}

double MilpProblem::max_integrality_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (vars_[j].integer) worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
  }
  return worst;
}

}  // namespace sccuc::solver
