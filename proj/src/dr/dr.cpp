#include "sccuc/dr/dr.hpp"

#include <algorithm>
#include <cmath>

#include "sccuc/detail/json_fields.hpp"
#include "sccuc/error.hpp"

namespace sccuc::dr {

using solver::MilpProblem;
using solver::Sense;

namespace {

void check_ratio(double v, const std::string& field) {
  if (!(v >= 0.0 && v <= 1.0)) throw SchemaError("field '" + field + "' must lie in [0,1]");
}

void check_baseline(std::span<const double> baseline) {
  if (baseline.empty()) throw DimensionError("DR block needs at least one period");
  for (double d : baseline) {
    if (!(d > 0.0)) throw SchemaError("baseline demand must be positive in every period");
  }
}

}  // namespace

void DrSpec::validate() const {
  if (classes.empty()) throw SchemaError("dr.il_classes must not be empty");
  double sum = beta4;
  for (std::size_t n = 0; n < classes.size(); ++n) {
    const std::string w = "dr.il_classes[" + std::to_string(n) + "]";
    check_ratio(classes[n].beta1, w + ".beta1");
    if (!(classes[n].compensation >= 0.0)) throw SchemaError("field '" + w + ".compensation' must be >= 0");
    sum += classes[n].beta1;
  }
  check_ratio(beta2, "dr.beta2");
  check_ratio(beta3, "dr.beta3");
  check_ratio(beta4, "dr.beta4");
  if (!(c_in >= 0.0)) throw SchemaError("field 'dr.c_sl_in' must be >= 0");
  if (!(c_out >= 0.0)) throw SchemaError("field 'dr.c_sl_out' must be >= 0");
  if (!(sum < 1.0)) throw SchemaError("dr: sum of beta1 plus beta4 must stay below 1");
}

DrSpec parse_dr_spec(const nlohmann::json& doc, const std::string& where) {
  using namespace detail;
  reject_unknown_keys(doc, {"il_classes", "beta2", "beta3", "beta4", "c_sl_in", "c_sl_out"}, where);
  DrSpec s;
  if (doc.contains("il_classes")) {
    s.classes.clear();
    const auto& arr = require_array(doc, "il_classes", where);
    for (std::size_t n = 0; n < arr.size(); ++n) {
      const std::string w = where + ".il_classes[" + std::to_string(n) + "]";
      reject_unknown_keys(arr[n], {"name", "beta1", "compensation"}, w);
      s.classes.push_back({require_string(arr[n], "name", w), require_number(arr[n], "beta1", w),
                           require_number(arr[n], "compensation", w)});
    }
  }
  if (doc.contains("beta2")) s.beta2 = require_number(doc, "beta2", where);
  if (doc.contains("beta3")) s.beta3 = require_number(doc, "beta3", where);
  if (doc.contains("beta4")) s.beta4 = require_number(doc, "beta4", where);
  if (doc.contains("c_sl_in")) s.c_in = require_number(doc, "c_sl_in", where);
  if (doc.contains("c_sl_out")) s.c_out = require_number(doc, "c_sl_out", where);
  s.validate();
  return s;
}

nlohmann::json dr_spec_to_json(const DrSpec& s) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : s.classes) classes.push_back({{"name", c.name}, {"beta1", c.beta1}, {"compensation", c.compensation}});
  return {{"il_classes", classes}, {"beta2", s.beta2}, {"beta3", s.beta3},
          {"beta4", s.beta4},      {"c_sl_in", s.c_in}, {"c_sl_out", s.c_out}};
}

DrDecisions DrDecisions::zero(std::size_t classes, std::size_t periods) {
  DrDecisions d;
  d.curtail.assign(classes, std::vector<double>(periods, 0.0));
  d.shift_in.assign(periods, 0.0);
  d.shift_out.assign(periods, 0.0);
  d.z_in.assign(periods, 0);
  d.z_out.assign(periods, 0);
  return d;
}

DrBlock build_dr_block(MilpProblem& p, const DrSpec& spec, std::span<const double> baseline) {
  spec.validate();
  check_baseline(baseline);
  const std::size_t T = baseline.size();
  const int nT = static_cast<int>(T);
  DrBlock b;
  b.curtail.resize(spec.classes.size());
  for (std::size_t n = 0; n < spec.classes.size(); ++n) {
    for (int t = 0; t < nT; ++t) {
      b.curtail[n].push_back(p.add_variable({"curt", static_cast<int>(n), t}, 0.0,
                                            spec.classes[n].beta1 * baseline[static_cast<std::size_t>(t)], false, 0.0));
    }
  }
  for (int t = 0; t < nT; ++t) {
    const double d = baseline[static_cast<std::size_t>(t)];
    b.shift_in.push_back(p.add_variable({"p_in", -1, t}, 0.0, spec.beta3 * d, false, 0.0));
    b.shift_out.push_back(p.add_variable({"p_out", -1, t}, 0.0, spec.beta4 * d, false, 0.0));
    b.z_in.push_back(p.add_variable({"z_in", -1, t}, 0.0, 1.0, true, 0.0));
    b.z_out.push_back(p.add_variable({"z_out", -1, t}, 0.0, 1.0, true, 0.0));
  }

  b.first_row = p.num_rows();
  for (std::size_t n = 0; n < spec.classes.size(); ++n) {
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<solver::Term> terms{{b.curtail[n][t], 1.0}};
      if (t > 0) terms.push_back({b.curtail[n][t - 1], 1.0});
      p.add_constraint("il_window_" + std::to_string(n) + "_t" + std::to_string(t), std::move(terms), Sense::kLe,
                       spec.beta2 * baseline[t]);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    const std::string suffix = "_t" + std::to_string(t);
    p.add_constraint("sl_excl" + suffix, {{b.z_in[t], 1.0}, {b.z_out[t], 1.0}}, Sense::kLe, 1.0);
    p.add_constraint("sl_in" + suffix, {{b.shift_in[t], 1.0}, {b.z_in[t], -spec.beta3 * baseline[t]}}, Sense::kLe, 0.0);
    p.add_constraint("sl_out" + suffix, {{b.shift_out[t], 1.0}, {b.z_out[t], -spec.beta4 * baseline[t]}}, Sense::kLe, 0.0);
  }
  std::vector<solver::Term> conserve;
  for (std::size_t t = 0; t < T; ++t) {
    conserve.push_back({b.shift_in[t], 1.0});
    conserve.push_back({b.shift_out[t], -1.0});
  }
  p.add_constraint("sl_conserve", std::move(conserve), Sense::kEq, 0.0);
  b.num_rows = p.num_rows() - b.first_row;
  return b;
}

void add_payment_objective(MilpProblem& p, const DrBlock& block, const DrSpec& spec,
                           std::span<const double> baseline, std::span<const double> price) {
  if (price.size() != baseline.size() || block.shift_in.size() != baseline.size()) {
    throw DimensionError("price, baseline and DR block horizons differ");
  }
  for (std::size_t t = 0; t < baseline.size(); ++t) {
    const double lambda = price[t];
    p.add_objective_offset(lambda * baseline[t]);
    for (std::size_t n = 0; n < spec.classes.size(); ++n) {
      p.add_objective(block.curtail[n][t], -(lambda + spec.classes[n].compensation));
    }
    p.add_objective(block.shift_in[t], lambda - spec.c_in);
    p.add_objective(block.shift_out[t], -(lambda + spec.c_out));
  }
}

DrDecisions extract_decisions(const DrBlock& block, std::span<const double> x) {
  const std::size_t T = block.shift_in.size();
  DrDecisions d = DrDecisions::zero(block.curtail.size(), T);
  auto at = [&](int col) { return x[static_cast<std::size_t>(col)]; };
  for (std::size_t n = 0; n < block.curtail.size(); ++n) {
    for (std::size_t t = 0; t < T; ++t) d.curtail[n][t] = at(block.curtail[n][t]);
  }
  for (std::size_t t = 0; t < T; ++t) {
    d.shift_in[t] = at(block.shift_in[t]);
    d.shift_out[t] = at(block.shift_out[t]);
    d.z_in[t] = static_cast<int>(std::lround(at(block.z_in[t])));
    d.z_out[t] = static_cast<int>(std::lround(at(block.z_out[t])));
  }
  return d;
}

std::vector<double> effective_demand(std::span<const double> baseline, const DrDecisions& d) {
  if (d.periods() != baseline.size()) throw DimensionError("DR decisions and baseline horizons differ");
  std::vector<double> out(baseline.begin(), baseline.end());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] += d.shift_in[t] - d.shift_out[t];
    for (const auto& c : d.curtail) out[t] -= c[t];
  }
  return out;
}

Payment consumer_payment(std::span<const double> baseline, const DrDecisions& d,
                         std::span<const double> price, const DrSpec& spec) {
  if (price.size() != baseline.size()) throw DimensionError("price and baseline horizons differ");
  if (d.curtail.size() != spec.classes.size()) throw DimensionError("DR decisions and spec class counts differ");
  const auto demand = effective_demand(baseline, d);
  Payment pay;
  pay.per_period.resize(baseline.size());
  for (std::size_t t = 0; t < baseline.size(); ++t) {
    double v = price[t] * demand[t] - spec.c_in * d.shift_in[t] - spec.c_out * d.shift_out[t];
    for (std::size_t n = 0; n < spec.classes.size(); ++n) v -= spec.classes[n].compensation * d.curtail[n][t];
    pay.per_period[t] = v;
    pay.total += v;
  }
  return pay;
}

double max_violation(const DrSpec& spec, std::span<const double> baseline, const DrDecisions& d) {
  double worst = 0.0;
  auto over = [&](double lhs, double rhs) { worst = std::max(worst, lhs - rhs); };
  double sum_in = 0.0, sum_out = 0.0;
  for (std::size_t t = 0; t < baseline.size(); ++t) {
    const double D = baseline[t];
    for (std::size_t n = 0; n < spec.classes.size(); ++n) {
      const double c = d.curtail[n][t];
      over(0.0, c);
      over(c, spec.classes[n].beta1 * D);
      over(c + (t > 0 ? d.curtail[n][t - 1] : 0.0), spec.beta2 * D);
    }
    over(d.z_in[t] + d.z_out[t], 1.0);
    over(0.0, d.shift_in[t]);
    over(0.0, d.shift_out[t]);
    over(d.shift_in[t], spec.beta3 * D * d.z_in[t]);
    over(d.shift_out[t], spec.beta4 * D * d.z_out[t]);
    sum_in += d.shift_in[t];
    sum_out += d.shift_out[t];
  }
  return std::max(worst, std::abs(sum_in - sum_out));
}

}  // namespace sccuc::dr
