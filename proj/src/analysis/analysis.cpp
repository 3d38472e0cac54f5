#include "sccuc/analysis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "sccuc/error.hpp"
#include "sccuc/network/fault.hpp"

namespace sccuc::analysis {

std::string to_string(SccSource s) { return s == SccSource::kSurrogate ? "surrogate" : "oracle"; }

namespace {

std::vector<int> commitment_at(const uc::UcSolution& sol, std::size_t t) {
  std::vector<int> u;
  for (const auto& row : sol.u) u.push_back(row[t]);
  return u;
}

std::vector<double> alpha_at(const uc::TimeSeriesInputs& inputs, std::size_t t) {
  std::vector<double> a;
  for (const auto& row : inputs.alpha) a.push_back(row[t]);
  return a;
}

void fill_minimum(SccProfile& p) {
  p.minimum.clear();
  for (const auto& row : p.values) p.minimum.push_back(*std::min_element(row.begin(), row.end()));
}

void check_dims(const uc::UcSolution& sol, const uc::TimeSeriesInputs& inputs, std::size_t generators) {
  if (sol.u.size() != generators) throw DimensionError("solution unit count differs from the model");
  for (const auto& row : sol.u) {
    if (row.size() != inputs.periods()) throw DimensionError("solution horizon differs from the inputs");
  }
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SccProfile scc_profile(const uc::UcSolution& sol, const uc::TimeSeriesInputs& inputs,
                       const surrogate::SccSurrogate& s) {
  check_dims(sol, inputs, s.num_generators());
  if (inputs.alpha.size() != s.num_ibrs()) throw DimensionError("inputs IBR count differs from the surrogate");
  SccProfile prof;
  prof.source = SccSource::kSurrogate;
  prof.bus_ids = s.bus_ids;
  prof.values.assign(s.num_buses(), std::vector<double>(inputs.periods(), 0.0));
  for (std::size_t t = 0; t < inputs.periods(); ++t) {
    const auto u = commitment_at(sol, t);
    const auto a = alpha_at(inputs, t);
    for (std::size_t b = 0; b < s.num_buses(); ++b) prof.values[b][t] = s.evaluate_at(b, u, a);
  }
  fill_minimum(prof);
  return prof;
}

SccProfile scc_profile(const uc::UcSolution& sol, const network::GridModel& grid,
                       const uc::TimeSeriesInputs& inputs) {
  check_dims(sol, inputs, grid.num_generators());
  SccProfile prof;
  prof.source = SccSource::kOracle;
  prof.bus_ids = grid.bus_ids;
  prof.values.assign(grid.num_buses(), std::vector<double>(inputs.periods(), 0.0));
  for (std::size_t t = 0; t < inputs.periods(); ++t) {
    const auto u = commitment_at(sol, t);
    const network::FaultAnalysis fa(grid, u);
    const auto cur = fa.currents(alpha_at(inputs, t));
    for (std::size_t b = 0; b < grid.num_buses(); ++b) prof.values[b][t] = cur[b];
  }
  fill_minimum(prof);
  return prof;
}

std::vector<int> inadequate_buses(const SccProfile& profile, double threshold) {
  std::vector<int> out;
  for (std::size_t b = 0; b < profile.bus_ids.size(); ++b) {
    if (profile.minimum[b] < threshold) out.push_back(profile.bus_ids[b]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CostReport cost_breakdown(const uc::UcSolution& sol, const network::GridModel& grid,
                          const uc::TimeSeriesInputs& inputs, const std::optional<dr::DrSpec>& spec,
                          const std::string& label) {
  const auto c = uc::recompute_costs(grid, inputs, spec, sol);
  if (std::abs(c.total - sol.objective) > 1e-6 * std::max(1.0, std::abs(sol.objective))) {
    throw ConsistencyError("cost breakdown total " + g17(c.total) + " does not match objective " + g17(sol.objective));
  }
  return {label, c.operation, c.payment, c.total};
}

void write_profile_csv(const SccProfile& profile, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << "bus,min";
  const std::size_t T = profile.values.empty() ? 0 : profile.values.front().size();
  for (std::size_t t = 0; t < T; ++t) f << ",t" << t;
  f << "\n";
  for (std::size_t b = 0; b < profile.bus_ids.size(); ++b) {
    f << profile.bus_ids[b] << "," << g17(profile.minimum[b]);
    for (double v : profile.values[b]) f << "," << g17(v);
    f << "\n";
  }
}

void write_costs_csv(const std::vector<CostReport>& reports, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << "label,operation,payment,total\n";
  for (const auto& r : reports) f << r.label << "," << g17(r.operation) << "," << g17(r.payment) << "," << g17(r.total) << "\n";
}

nlohmann::json profile_to_json(const SccProfile& profile) {
  return {{"source", to_string(profile.source)},
          {"bus_ids", profile.bus_ids},
          {"minimum", profile.minimum},
          {"values", profile.values}};
}

}  // namespace sccuc::analysis
