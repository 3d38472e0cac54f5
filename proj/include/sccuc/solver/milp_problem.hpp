#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sccuc::solver {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLe, kGe, kEq };

/// Registry key of a column: what it models, which unit/class/pair, which period.
struct VarKey {
  std::string kind;
  int index = -1;
  int period = -1;

  auto operator<=>(const VarKey&) const = default;
  bool operator==(const VarKey&) const = default;
};

struct Variable {
  VarKey key;
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  bool integer = false;
  double obj = 0.0;
};

struct Term {
  int col = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

/// Linear objective, linear rows and bounded (optionally integral) columns.
/// Columns are registered under a unique VarKey; the registry is a bijection
/// onto column indices.
class MilpProblem {
 public:
  int add_variable(VarKey key, double lb, double ub, bool integer, double obj);
  int add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs);

  std::size_t num_cols() const { return vars_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_integer() const;

  const Variable& variable(std::size_t col) const { return vars_[col]; }
  Variable& variable(std::size_t col) { return vars_[col]; }
  const Constraint& constraint(std::size_t row) const { return rows_[row]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }

  std::optional<int> find(const VarKey& key) const;
  /// Throws std::out_of_range when the key is not registered.
  int column(const VarKey& key) const;
  int column(const std::string& kind, int index, int period) const { return column(VarKey{kind, index, period}); }

  void add_objective(int col, double coef) { vars_[static_cast<std::size_t>(col)].obj += coef; }
  double objective_offset() const { return offset_; }
  void add_objective_offset(double v) { offset_ += v; }

  std::string name;

  double objective_value(std::span<const double> x) const;
  double row_activity(std::size_t row, std::span<const double> x) const;
  /// Largest absolute bound or row violation of x (integrality ignored).
  double max_violation(std::span<const double> x) const;
  /// Largest distance of an integer column from the nearest integer.
  double max_integrality_violation(std::span<const double> x) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::map<VarKey, int> registry_;
  double offset_ = 0.0;
};

std::string default_column_name(const VarKey& key);

}  // namespace sccuc::solver
