#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sccuc/network/grid.hpp"

namespace sccuc::surrogate {

/// One training point: a commitment/availability state and the oracle fault
/// current at every bus (ordered like GridModel::bus_ids).
struct SccSample {
  std::vector<int> commitment;
  std::vector<double> alpha;
  std::vector<double> currents;
  double weight = 1.0;
};

struct SamplingStrategy {
  enum class Kind { kExhaustive, kRandom };
  Kind kind = Kind::kExhaustive;
  std::size_t count = 0;   // random only
  std::uint64_t seed = 0;  // random only
  std::size_t cap = 1'000'000;

  static SamplingStrategy exhaustive(std::size_t cap = 1'000'000) {
    return {Kind::kExhaustive, 0, 0, cap};
  }
  static SamplingStrategy random(std::size_t count, std::uint64_t seed) {
    return {Kind::kRandom, count, seed, 1'000'000};
  }
};

inline const std::vector<double> kDefaultAlphaGrid = {0.0, 0.25, 0.5, 0.75, 1.0};

/// Exhaustive: every commitment vector crossed with every joint choice of
/// alpha levels (2^G * |grid|^C samples, rejected above strategy.cap).
/// Random: independent fair coin per unit and a uniform alpha level per IBR,
/// reproducible from the seed.
std::vector<SccSample> generate_samples(const network::GridModel& grid,
                                        const SamplingStrategy& strategy,
                                        const std::vector<double>& alpha_grid = kDefaultAlphaGrid);

/// Deterministic shuffle-and-split; the first element gets round(fraction*n).
std::pair<std::vector<SccSample>, std::vector<SccSample>> split_samples(
    std::vector<SccSample> samples, double train_fraction, std::uint64_t seed);

}  // namespace sccuc::surrogate
