#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sccuc/solver/milp_problem.hpp"

namespace sccuc::dr {

struct IlClass {
  std::string name;
  double beta1 = 0.0;         // per-period curtailment ratio
  double compensation = 0.0;  // per MWh curtailed
};

/// Incentive parameters for interruptible load (IL) and shiftable load (SL).
/// Defaults are the case-study values.
struct DrSpec {
  std::vector<IlClass> classes{{"I", 0.1, 50.0}, {"II", 0.08, 70.0}, {"III", 0.05, 100.0}};
  double beta2 = 0.2;  // two-period IL cap, applied per class
  double beta3 = 0.12;  // shift-in ratio
  double beta4 = 0.12;  // shift-out ratio
  double c_in = 20.0;
  double c_out = 30.0;

  /// Throws SchemaError on ratios outside [0,1], negative compensation, or
  /// sum(beta1) + beta4 >= 1.
  void validate() const;
};

DrSpec parse_dr_spec(const nlohmann::json& doc, const std::string& where = "dr");
nlohmann::json dr_spec_to_json(const DrSpec& s);

/// Per-period DR actions; curtail is indexed [class][period].
struct DrDecisions {
  std::vector<std::vector<double>> curtail;
  std::vector<double> shift_in;
  std::vector<double> shift_out;
  std::vector<int> z_in;
  std::vector<int> z_out;

  std::size_t periods() const { return shift_in.size(); }
  static DrDecisions zero(std::size_t classes, std::size_t periods);
};

/// Columns of the DR block inside a MilpProblem.
struct DrBlock {
  std::vector<std::vector<int>> curtail;  // [class][period]
  std::vector<int> shift_in, shift_out, z_in, z_out;
  std::size_t first_row = 0;
  std::size_t num_rows = 0;
};

/// Adds the IL and SL variables and rows:
///   0 <= curt_{n,t} <= beta1_n D_t           (column bound)
///   curt_{n,t-1} + curt_{n,t} <= beta2 D_t   (curt_{n,-1} = 0)
///   z_in_t + z_out_t <= 1
///   p_in_t <= beta3 D_t z_in_t,  p_out_t <= beta4 D_t z_out_t
///   sum_t p_in_t = sum_t p_out_t
/// No objective terms are added here; see add_payment_objective().
DrBlock build_dr_block(solver::MilpProblem& p, const DrSpec& spec, std::span<const double> baseline);

/// Adds the consumer payment sum_t (lambda_t D'_t - compensations) to the
/// objective, with D'_t the post-DR demand. The constant part sum lambda D
/// goes to the objective offset.
void add_payment_objective(solver::MilpProblem& p, const DrBlock& block, const DrSpec& spec,
                           std::span<const double> baseline, std::span<const double> price);

DrDecisions extract_decisions(const DrBlock& block, std::span<const double> x);

/// D_t - out_t + in_t - sum_n curt_{n,t}
std::vector<double> effective_demand(std::span<const double> baseline, const DrDecisions& d);

struct Payment {
  std::vector<double> per_period;
  double total = 0.0;
};

/// Energy bill at the post-DR demand minus IL and SL compensation.
Payment consumer_payment(std::span<const double> baseline, const DrDecisions& d,
                         std::span<const double> price, const DrSpec& spec);

/// Largest violation of the DR rows by d (binaries taken as given).
double max_violation(const DrSpec& spec, std::span<const double> baseline, const DrDecisions& d);

}  // namespace sccuc::dr
