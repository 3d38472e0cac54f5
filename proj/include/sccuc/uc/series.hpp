#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "sccuc/network/grid.hpp"

namespace sccuc::uc {

/// Per-period inputs of the dispatch. Periods are one hour long, so MW and
/// MWh are interchangeable.
struct TimeSeriesInputs {
  std::vector<double> demand;              // baseline demand, MW
  std::vector<double> price;               // energy price per MWh
  std::vector<std::vector<double>> alpha;  // [ibr][period], same order as grid.ibrs

  std::size_t periods() const { return demand.size(); }
  /// Throws DimensionError on horizon or IBR count mismatch, SchemaError on
  /// alpha outside [0,1] or negative demand.
  void validate(const network::GridModel& grid) const;
  /// First `periods` entries of every series.
  TimeSeriesInputs truncated(std::size_t periods) const;
};

/// Schema: {"periods": T, "demand_mw": [...], "price": [...],
/// "alpha": {"<ibr id>": [...], ...}, "notes": "..."}. Every IBR of the grid
/// needs an alpha series; unknown keys and unknown IBR ids are rejected.
TimeSeriesInputs parse_series(const nlohmann::json& doc, const network::GridModel& grid);
TimeSeriesInputs load_series(const std::filesystem::path& path, const network::GridModel& grid);
nlohmann::json series_to_json(const TimeSeriesInputs& s, const network::GridModel& grid);

}  // namespace sccuc::uc
