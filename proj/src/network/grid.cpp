#include "sccuc/network/grid.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "sccuc/detail/json_fields.hpp"
#include "sccuc/error.hpp"

namespace sccuc::network {

using detail::reject_unknown_keys;
using detail::require_array;
using detail::require_int;
using detail::require_number;
using detail::require_string;
using nlohmann::json;

std::size_t GridModel::bus_index(int bus_id) const {
  auto it = index_.find(bus_id);
  if (it == index_.end()) throw DimensionError("unknown bus id " + std::to_string(bus_id));
  return it->second;
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

void GridModel::validate() {
  index_.clear();
  if (bus_ids.empty()) throw SchemaError("field 'buses' must not be empty");
  for (std::size_t i = 0; i < bus_ids.size(); ++i) {
    if (!index_.emplace(bus_ids[i], i).second) {
      throw SchemaError("duplicate bus id " + std::to_string(bus_ids[i]) + " in 'buses'");
    }
  }
  if (!(scc_threshold > 0.0)) throw SchemaError("field 'scc_threshold_pu' must be > 0");
  if (!(base_mva > 0.0)) throw SchemaError("field 'base_mva' must be > 0");

  std::vector<std::size_t> parent(bus_ids.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const auto& br = branches[k];
    const std::string where = "branches[" + std::to_string(k) + "]";
    if (!has_bus(br.from)) throw SchemaError(where + ".from references unknown bus " + std::to_string(br.from));
    if (!has_bus(br.to)) throw SchemaError(where + ".to references unknown bus " + std::to_string(br.to));
    if (br.from == br.to) throw SchemaError(where + " connects a bus to itself");
    if (!(std::hypot(br.r, br.x) > 0.0)) throw SchemaError(where + " has zero series impedance");
    parent[find_root(parent, index_[br.from])] = find_root(parent, index_[br.to]);
  }
  const std::size_t root = find_root(parent, 0);
  for (std::size_t i = 0; i < bus_ids.size(); ++i) {
    if (find_root(parent, i) != root) {
      throw TopologyError("branch graph is disconnected: bus " + std::to_string(bus_ids[i]) +
                          " is not reachable from bus " + std::to_string(bus_ids[0]));
    }
  }

  for (std::size_t k = 0; k < generators.size(); ++k) {
    const auto& g = generators[k];
    const std::string where = "generators[" + std::to_string(k) + "]";
    if (!has_bus(g.bus)) throw SchemaError(where + ".bus references unknown bus " + std::to_string(g.bus));
    if (!(g.p_min > 0.0 && g.p_min <= g.p_max)) throw SchemaError(where + ": need 0 < p_min <= p_max");
    if (g.c_nl < 0.0 || g.c_m < 0.0 || g.k_st < 0.0 || g.k_sh < 0.0) {
      throw SchemaError(where + ": cost coefficients must be >= 0");
    }
    if (g.u0 != 0 && g.u0 != 1) throw SchemaError(where + ".u0 must be 0 or 1");
    if (!(g.x_subtransient > 0.0)) throw SchemaError(where + ".x_subtransient must be > 0");
  }
  for (std::size_t k = 0; k < ibrs.size(); ++k) {
    const auto& c = ibrs[k];
    const std::string where = "ibrs[" + std::to_string(k) + "]";
    if (!has_bus(c.bus)) throw SchemaError(where + ".bus references unknown bus " + std::to_string(c.bus));
    if (c.p_max < 0.0) throw SchemaError(where + ".p_max must be >= 0");
    if (c.fault_current_factor < 1.0 || c.fault_current_factor > 2.0) {
      throw SchemaError(where + ".fault_current_factor must lie in [1, 2]");
    }
    if (c.rated_current < 0.0) throw SchemaError(where + ".rated_current_pu must be >= 0");
  }
}

GridModel parse_grid(const json& doc) {
  reject_unknown_keys(doc, {"name", "notes", "base_mva", "scc_threshold_pu", "buses", "branches",
                            "generators", "ibrs"},
                      "grid");
  GridModel grid;
  grid.name = doc.value("name", std::string{});
  grid.base_mva = doc.contains("base_mva") ? require_number(doc, "base_mva", "grid") : 100.0;
  grid.scc_threshold = require_number(doc, "scc_threshold_pu", "grid");

  const auto& buses = require_array(doc, "buses", "grid");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const std::string where = "buses[" + std::to_string(i) + "]";
    reject_unknown_keys(buses[i], {"id", "name"}, where);
    grid.bus_ids.push_back(require_int(buses[i], "id", where));
  }
  const auto& branches = require_array(doc, "branches", "grid");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    const std::string where = "branches[" + std::to_string(i) + "]";
    reject_unknown_keys(b, {"from", "to", "r", "x"}, where);
    grid.branches.push_back({require_int(b, "from", where), require_int(b, "to", where),
                             require_number(b, "r", where), require_number(b, "x", where)});
  }
  const auto& gens = require_array(doc, "generators", "grid");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& g = gens[i];
    const std::string where = "generators[" + std::to_string(i) + "]";
    reject_unknown_keys(g, {"id", "bus", "p_min", "p_max", "c_nl", "c_m", "k_st", "k_sh", "u0",
                            "x_subtransient"},
                        where);
    SyncGenerator sg;
    sg.id = g.contains("id") ? require_string(g, "id", where) : "g" + std::to_string(i);
    sg.bus = require_int(g, "bus", where);
    sg.p_min = require_number(g, "p_min", where);
    sg.p_max = require_number(g, "p_max", where);
    sg.c_nl = require_number(g, "c_nl", where);
    sg.c_m = require_number(g, "c_m", where);
    sg.k_st = require_number(g, "k_st", where);
    sg.k_sh = require_number(g, "k_sh", where);
    sg.u0 = require_int(g, "u0", where);
    sg.x_subtransient = require_number(g, "x_subtransient", where);
    grid.generators.push_back(std::move(sg));
  }
  if (doc.contains("ibrs")) {
    const auto& ibrs = require_array(doc, "ibrs", "grid");
    for (std::size_t i = 0; i < ibrs.size(); ++i) {
      const auto& c = ibrs[i];
      const std::string where = "ibrs[" + std::to_string(i) + "]";
      reject_unknown_keys(c, {"id", "bus", "p_max", "fault_current_factor", "rated_current_pu"}, where);
      Ibr ibr;
      ibr.id = c.contains("id") ? require_string(c, "id", where) : "c" + std::to_string(i);
      ibr.bus = require_int(c, "bus", where);
      ibr.p_max = require_number(c, "p_max", where);
      ibr.fault_current_factor =
          c.contains("fault_current_factor") ? require_number(c, "fault_current_factor", where) : 1.2;
      ibr.rated_current = require_number(c, "rated_current_pu", where);
      grid.ibrs.push_back(std::move(ibr));
    }
  }

  std::set<std::string> ids;
  for (const auto& g : grid.generators) {
    if (!ids.insert(g.id).second) throw SchemaError("duplicate generator id '" + g.id + "'");
  }
  for (const auto& c : grid.ibrs) {
    if (!ids.insert(c.id).second) throw SchemaError("duplicate ibr id '" + c.id + "'");
  }
  grid.validate();
  return grid;
}

GridModel load_grid(const std::filesystem::path& path) {
  return parse_grid(detail::read_json_file(path));
}

json grid_to_json(const GridModel& grid) {
  json doc;
  doc["name"] = grid.name;
  doc["base_mva"] = grid.base_mva;
  doc["scc_threshold_pu"] = grid.scc_threshold;
  doc["buses"] = json::array();
  for (int id : grid.bus_ids) doc["buses"].push_back({{"id", id}});
  doc["branches"] = json::array();
  for (const auto& b : grid.branches) {
    doc["branches"].push_back({{"from", b.from}, {"to", b.to}, {"r", b.r}, {"x", b.x}});
  }
  doc["generators"] = json::array();
  for (const auto& g : grid.generators) {
    doc["generators"].push_back({{"id", g.id}, {"bus", g.bus}, {"p_min", g.p_min}, {"p_max", g.p_max},
                                 {"c_nl", g.c_nl}, {"c_m", g.c_m}, {"k_st", g.k_st}, {"k_sh", g.k_sh},
                                 {"u0", g.u0}, {"x_subtransient", g.x_subtransient}});
  }
  doc["ibrs"] = json::array();
  for (const auto& c : grid.ibrs) {
    doc["ibrs"].push_back({{"id", c.id}, {"bus", c.bus}, {"p_max", c.p_max},
                           {"fault_current_factor", c.fault_current_factor},
                           {"rated_current_pu", c.rated_current}});
  }
  return doc;
}

}  // namespace sccuc::network
