#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace sccuc::network {

struct Branch {
  int from = 0;
  int to = 0;
  double r = 0.0;  // series resistance, p.u.
  double x = 0.0;  // series reactance, p.u.
};

struct SyncGenerator {
  std::string id;
  int bus = 0;
  double p_min = 0.0;  // MW
  double p_max = 0.0;  // MW
  double c_nl = 0.0;   // no-load cost per hour
  double c_m = 0.0;    // marginal cost per MWh
  double k_st = 0.0;   // start-up cost
  double k_sh = 0.0;   // shut-down cost
  int u0 = 0;          // commitment before the first period
  double x_subtransient = 0.0;
};

// Converter-interfaced source (wind). Fault injection is current-limited.
struct Ibr {
  std::string id;
  int bus = 0;
  double p_max = 0.0;
  double fault_current_factor = 1.2;
  double rated_current = 0.0;  // p.u.
};

/// Static network description. Build through load_grid() or call
/// validate() after filling the fields by hand; the bus index used by every
/// matrix routine is only available on a validated model.
struct GridModel {
  std::string name;
  double base_mva = 100.0;
  double scc_threshold = 0.0;  // p.u.
  std::vector<int> bus_ids;
  std::vector<Branch> branches;
  std::vector<SyncGenerator> generators;
  std::vector<Ibr> ibrs;

  std::size_t num_buses() const { return bus_ids.size(); }
  std::size_t num_generators() const { return generators.size(); }
  std::size_t num_ibrs() const { return ibrs.size(); }

  /// Position of a bus id in bus_ids. Throws DimensionError when unknown.
  std::size_t bus_index(int bus_id) const;
  bool has_bus(int bus_id) const { return index_.count(bus_id) != 0; }

  /// Checks every invariant and builds the bus index. Throws SchemaError
  /// (naming the offending field) or TopologyError.
  void validate();

 private:
  std::map<int, std::size_t> index_;
};

GridModel parse_grid(const nlohmann::json& doc);
GridModel load_grid(const std::filesystem::path& path);
nlohmann::json grid_to_json(const GridModel& grid);

}  // namespace sccuc::network
