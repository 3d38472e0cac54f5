#include "sccuc/uc/series.hpp"

#include <algorithm>

#include "sccuc/detail/json_fields.hpp"
#include "sccuc/error.hpp"

namespace sccuc::uc {

void TimeSeriesInputs::validate(const network::GridModel& grid) const {
  const std::size_t T = demand.size();
  if (T == 0) throw DimensionError("series: horizon must be at least one period");
  if (price.size() != T) throw DimensionError("series: price has " + std::to_string(price.size()) + " periods, demand has " + std::to_string(T));
  if (alpha.size() != grid.num_ibrs()) throw DimensionError("series: alpha count differs from the grid's IBR count");
  for (std::size_t c = 0; c < alpha.size(); ++c) {
    if (alpha[c].size() != T) throw DimensionError("series: alpha." + grid.ibrs[c].id + " horizon differs from demand");
    for (double a : alpha[c]) {
      if (!(a >= 0.0 && a <= 1.0)) throw SchemaError("series: alpha." + grid.ibrs[c].id + " values must lie in [0,1]");
    }
  }
  for (double d : demand) {
    if (!(d >= 0.0)) throw SchemaError("series: demand_mw values must be >= 0");
  }
}

TimeSeriesInputs TimeSeriesInputs::truncated(std::size_t periods) const {
  if (periods == 0 || periods > demand.size()) throw DimensionError("series: cannot truncate to " + std::to_string(periods) + " periods");
  TimeSeriesInputs out;
  out.demand.assign(demand.begin(), demand.begin() + static_cast<std::ptrdiff_t>(periods));
  out.price.assign(price.begin(), price.begin() + static_cast<std::ptrdiff_t>(periods));
  for (const auto& a : alpha) out.alpha.emplace_back(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(periods));
  return out;
}

namespace {

std::vector<double> number_array(const nlohmann::json& obj, const std::string& key, const std::string& where) {
  const auto& arr = detail::require_array(obj, key, where);
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw SchemaError("field '" + where + "." + key + "[" + std::to_string(i) + "]' must be a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

}  // namespace

TimeSeriesInputs parse_series(const nlohmann::json& doc, const network::GridModel& grid) {
  using namespace detail;
  const std::string w = "series";
  reject_unknown_keys(doc, {"notes", "periods", "demand_mw", "price", "alpha"}, w);
  TimeSeriesInputs s;
  s.demand = number_array(doc, "demand_mw", w);
  s.price = number_array(doc, "price", w);
  const auto& alpha = require(doc, "alpha", w);
  if (!alpha.is_object()) throw SchemaError("field 'series.alpha' must be an object keyed by IBR id");
  for (auto it = alpha.begin(); it != alpha.end(); ++it) {
    const bool known = std::any_of(grid.ibrs.begin(), grid.ibrs.end(), [&](const network::Ibr& c) { return c.id == it.key(); });
    if (!known) throw SchemaError("unknown field 'series.alpha." + it.key() + "' (no such IBR)");
  }
  for (const auto& c : grid.ibrs) s.alpha.push_back(number_array(alpha, c.id, "series.alpha"));
  if (doc.contains("periods")) {
    const int T = require_int(doc, "periods", w);
    if (T < 1 || static_cast<std::size_t>(T) != s.demand.size()) {
      throw DimensionError("series: 'periods' is " + std::to_string(T) + " but demand_mw has " + std::to_string(s.demand.size()) + " entries");
    }
  }
  s.validate(grid);
  return s;
}

TimeSeriesInputs load_series(const std::filesystem::path& path, const network::GridModel& grid) {
  return parse_series(detail::read_json_file(path), grid);
}

nlohmann::json series_to_json(const TimeSeriesInputs& s, const network::GridModel& grid) {
  nlohmann::json alpha = nlohmann::json::object();
  for (std::size_t c = 0; c < grid.num_ibrs(); ++c) alpha[grid.ibrs[c].id] = s.alpha[c];
  return {{"periods", s.periods()}, {"demand_mw", s.demand}, {"price", s.price}, {"alpha", alpha}};
}

}  // namespace sccuc::uc
