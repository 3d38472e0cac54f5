#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sccuc/dr/dr.hpp"
#include "sccuc/network/grid.hpp"
#include "sccuc/surrogate/surrogate.hpp"
#include "sccuc/uc/series.hpp"
#include "sccuc/uc/uc_model.hpp"

namespace sccuc::analysis {

enum class SccSource { kSurrogate, kOracle };

std::string to_string(SccSource s);

struct SccProfile {
  SccSource source = SccSource::kSurrogate;
  std::vector<int> bus_ids;
  std::vector<std::vector<double>> values;  // [bus][period], p.u.
  std::vector<double> minimum;              // per bus over the horizon
};

/// Surrogate SCC at every bus and period of the schedule.
SccProfile scc_profile(const uc::UcSolution& sol, const uc::TimeSeriesInputs& inputs,
                       const surrogate::SccSurrogate& s);
/// Fault-analysis SCC at every bus and period of the schedule.
SccProfile scc_profile(const uc::UcSolution& sol, const network::GridModel& grid,
                       const uc::TimeSeriesInputs& inputs);

/// Buses whose minimum over the horizon is below `threshold`, ascending.
std::vector<int> inadequate_buses(const SccProfile& profile, double threshold);

struct CostReport {
  std::string label;
  double operation = 0.0;
  double payment = 0.0;
  double total = 0.0;
};

/// Operation cost, consumer payment and their sum, recomputed from the
/// decisions. Throws ConsistencyError when the total differs from the
/// solution's objective by more than 1e-6 relative.
CostReport cost_breakdown(const uc::UcSolution& sol, const network::GridModel& grid,
                          const uc::TimeSeriesInputs& inputs, const std::optional<dr::DrSpec>& spec,
                          const std::string& label = "");

/// bus,min,t0,t1,... table.
void write_profile_csv(const SccProfile& profile, const std::filesystem::path& path);
/// label,operation,payment,total table.
void write_costs_csv(const std::vector<CostReport>& reports, const std::filesystem::path& path);

nlohmann::json profile_to_json(const SccProfile& profile);

}  // namespace sccuc::analysis
