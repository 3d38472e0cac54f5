#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "paths.hpp"
#include "sccuc/error.hpp"
#include "sccuc/network/fault.hpp"

using namespace sccuc;
using nlohmann::json;

namespace {

json bus_list(std::initializer_list<int> ids) {
  json a = json::array();
  for (int id : ids) a.push_back({{"id", id}});
  return a;
}

json sg(const std::string& id, int bus, double x) {
  return {{"id", id}, {"bus", bus}, {"p_min", 1}, {"p_max", 10}, {"c_nl", 0}, {"c_m", 1},
          {"k_st", 0}, {"k_sh", 0}, {"u0", 0}, {"x_subtransient", x}};
}

json base(json buses, json branches, json gens, json ibrs = json::array()) {
  return {{"name", "t"}, {"base_mva", 100}, {"scc_threshold_pu", 1.0}, {"buses", buses},
          {"branches", branches}, {"generators", gens}, {"ibrs", ibrs}};
}

}  // namespace

TEST_CASE("fixture loads with the documented unit placement") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  CHECK(grid.num_buses() == 30);
  CHECK(grid.num_generators() == 12);
  std::multiset<int> sg_buses;
  for (const auto& g : grid.generators) sg_buses.insert(g.bus);
  for (int b : {2, 3, 4, 5, 27, 30}) CHECK(sg_buses.count(b) == 2);
  std::vector<int> ibr_buses;
  for (const auto& c : grid.ibrs) ibr_buses.push_back(c.bus);
  CHECK(ibr_buses == std::vector<int>{1, 23, 26});

  const auto& g = grid.generators.front();
  CHECK(g.bus == 2);
  CHECK(g.c_nl == 1743.0);
  CHECK(g.k_st == 20000.0);
  CHECK(g.p_max == 1317.0);
  CHECK(g.u0 == 1);
  // both bus-30 units start from off
  for (const auto& u : grid.generators)
    if (u.bus == 30) CHECK(u.u0 == 0);
}

TEST_CASE("schema violations name the field") {
  auto doc = base(bus_list({1, 2}), json::array({{{"from", 1}, {"to", 7}, {"r", 0}, {"x", 0.5}}}),
                  json::array({sg("a", 1, 0.2)}));
  CHECK_THROWS_AS(network::parse_grid(doc), SchemaError);

  doc = base(bus_list({1, 2}), json::array({{{"from", 1}, {"to", 2}, {"r", 0}, {"x", 0.5}}}),
             json::array({sg("a", 1, 0.2)}));
  doc["surprise"] = 1;
  CHECK_THROWS_AS(network::parse_grid(doc), SchemaError);

  doc = base(bus_list({1, 2, 3}), json::array({{{"from", 1}, {"to", 2}, {"r", 0}, {"x", 0.5}}}),
             json::array({sg("a", 1, 0.2)}));
  CHECK_THROWS_AS(network::parse_grid(doc), TopologyError);
}

TEST_CASE("two-bus nodal assembly") {
  const auto grid = network::parse_grid(
      base(bus_list({1, 2}), json::array({{{"from", 1}, {"to", 2}, {"r", 0}, {"x", 0.5}}}), json::array({sg("a", 1, 0.2)})));
  const std::vector<int> off{0};
  const auto y = network::build_fault_admittance(grid, off);
  const std::complex<double> ys = 1.0 / std::complex<double>(0.0, 0.5);
  CHECK(std::abs(y(0, 1) + ys) < 1e-15);
  CHECK(std::abs(y(1, 0) + ys) < 1e-15);
  CHECK(std::abs(y(0, 0) - ys) < 1e-15);
  CHECK(std::abs(y(1, 1) - ys) < 1e-15);
}

TEST_CASE("fixture admittance is symmetric with shunts only at unit buses") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  const std::vector<int> on(12, 1), off(12, 0);
  const auto y = network::build_fault_admittance(grid, on);
  const auto y0 = network::build_fault_admittance(grid, off);
  CHECK(y.rows() == 30);
  CHECK(y == y.transpose());
  const std::set<int> sg_buses{2, 3, 4, 5, 27, 30};
  for (std::size_t i = 0; i < 30; ++i) {
    const bool has = std::abs(y(i, i) - y0(i, i)) > 0.0;
    CHECK(has == (sg_buses.count(grid.bus_ids[i]) == 1));
  }
  CHECK((y - y0).cwiseAbs().sum() == doctest::Approx((y - y0).diagonal().cwiseAbs().sum()));
}

TEST_CASE("oracle trivial cases") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  const std::vector<int> off(12, 0);
  const std::vector<double> zero(3, 0.0);
  for (int b : {1, 11, 30}) CHECK(network::scc_oracle(grid, off, zero, b) == 0.0);

  const auto single = network::parse_grid(base(bus_list({1}), json::array(), json::array({sg("a", 1, 0.1)})));
  const std::vector<int> on{1};
  CHECK(network::scc_oracle(single, on, {}, 1) == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("fixture bus 1, all units on, full wind") {
  // frozen from tests/oracles/scc_reference.py
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  const std::vector<int> on(12, 1);
  const std::vector<double> a(3, 1.0);
  CHECK(network::scc_oracle(grid, on, a, 1) == doctest::Approx(13.933102142746419).epsilon(1e-10));
}

TEST_CASE("islanded wind still reaches the fault") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  const std::vector<int> off(12, 0);
  const std::vector<double> a{1.0, 0.0, 0.0};
  const double at_ibr = network::scc_oracle(grid, off, a, 1);
  CHECK(at_ibr == doctest::Approx(grid.ibrs[0].fault_current_factor * grid.ibrs[0].rated_current));
  // a radial tree carries the whole injection to any faulted bus
  CHECK(network::scc_oracle(grid, off, a, 2) > 0.0);
}

TEST_CASE("Y Z = I on the fixture") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    std::vector<int> u(12);
    for (auto& v : u) v = static_cast<int>(rng() & 1U);
    u[static_cast<std::size_t>(k % 12)] = 1;
    const network::FaultAnalysis fa(grid, u);
    const Eigen::MatrixXcd r = fa.admittance() * fa.impedance() - Eigen::MatrixXcd::Identity(30, 30);
    CHECK(r.cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("oracle is monotone in commitment and availability") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < 60; ++k) {
    std::vector<int> u(12);
    std::vector<double> a(3);
    for (auto& v : u) v = unif(rng) < 0.5;
    for (auto& v : a) v = unif(rng);
    const auto before = network::FaultAnalysis(grid, u).currents(a);

    auto u2 = u;
    u2[rng() % 12] = 1;
    const auto more_units = network::FaultAnalysis(grid, u2).currents(a);
    for (std::size_t b = 0; b < 30; ++b) CHECK(more_units[b] >= before[b] * (1.0 - 1e-12));

    auto a3 = a;
    const std::size_t c = rng() % 3;
    a3[c] = a[c] + (1.0 - a[c]) * unif(rng);
    const auto more_wind = network::FaultAnalysis(grid, u).currents(a3);
    for (std::size_t b = 0; b < 30; ++b) CHECK(more_wind[b] >= before[b]);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  const std::vector<int> short_u(11, 1);
  const std::vector<double> a(3, 1.0);
  CHECK_THROWS_AS(network::scc_oracle(grid, short_u, a, 1), DimensionError);
  const std::vector<int> on(12, 1);
  CHECK_THROWS_AS(network::scc_oracle(grid, on, a, 99), DimensionError);
}
