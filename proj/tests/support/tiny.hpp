#pragma once

#include "paths.hpp"
#include "sccuc/network/grid.hpp"
#include "sccuc/surrogate/surrogate.hpp"
#include "sccuc/uc/series.hpp"

namespace sccuc::test {

struct Tiny {
  network::GridModel grid = network::load_grid(data("tiny_grid.json"));
  uc::TimeSeriesInputs inputs = uc::load_series(data("tiny_series.json"), grid);
  surrogate::SccSurrogate surrogate =
      surrogate::fit_surrogate(grid, surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive()));
};

// Surrogate shell with the right shape for `grid`; every coefficient `k`.
inline surrogate::SccSurrogate flat_surrogate(const network::GridModel& grid, double k) {
  surrogate::SccSurrogate s;
  s.bus_ids = grid.bus_ids;
  for (const auto& g : grid.generators) s.generator_ids.push_back(g.id);
  for (const auto& c : grid.ibrs) s.ibr_ids.push_back(c.id);
  s.pairs = surrogate::generator_pairs(grid.num_generators());
  s.k_g.assign(grid.num_buses(), std::vector<double>(grid.num_generators(), k));
  s.k_c.assign(grid.num_buses(), std::vector<double>(grid.num_ibrs(), k));
  s.k_m.assign(grid.num_buses(), std::vector<double>(s.pairs.size(), k));
  s.diagnostics.resize(grid.num_buses());
  s.conservative_shift.assign(grid.num_buses(), 0.0);
  return s;
}

}  // namespace sccuc::test
