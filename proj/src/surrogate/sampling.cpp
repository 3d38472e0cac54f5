#include "sccuc/surrogate/sampling.hpp"

#include <cmath>
#include <random>
#include <string>

#include "sccuc/error.hpp"
#include "sccuc/network/fault.hpp"

namespace sccuc::surrogate {

namespace {

// Saturating size arithmetic for the exhaustive cap check.
std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > limit / base) return limit + 1;
    out *= base;
  }
  return out;
}

}  // namespace

std::vector<SccSample> generate_samples(const network::GridModel& grid,
                                        const SamplingStrategy& strategy,
                                        const std::vector<double>& alpha_grid) {
  if (alpha_grid.empty()) throw Error("alpha grid must not be empty");
  for (double a : alpha_grid) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error("alpha grid levels must lie in [0, 1]");
  }
  const std::size_t ng = grid.num_generators();
  const std::size_t nc = grid.num_ibrs();
  std::vector<SccSample> out;

  if (strategy.kind == SamplingStrategy::Kind::kExhaustive) {
    const std::size_t n_commit = checked_pow(2, ng, strategy.cap);
    const std::size_t n_alpha = checked_pow(alpha_grid.size(), nc, strategy.cap);
    if (n_commit > strategy.cap || n_alpha > strategy.cap || n_commit * n_alpha > strategy.cap) {
      throw Error("exhaustive sampling exceeds the cap of " + std::to_string(strategy.cap) +
                  " samples");
    }
    out.reserve(n_commit * n_alpha);
    std::vector<int> u(ng);
    std::vector<double> alpha(nc);
    for (std::size_t mask = 0; mask < n_commit; ++mask) {
      for (std::size_t g = 0; g < ng; ++g) u[g] = static_cast<int>((mask >> g) & 1U);
      const network::FaultAnalysis fa(grid, u);
      for (std::size_t code = 0; code < n_alpha; ++code) {
        std::size_t rest = code;
        for (std::size_t c = 0; c < nc; ++c) {
          alpha[c] = alpha_grid[rest % alpha_grid.size()];
          rest /= alpha_grid.size();
        }
        out.push_back({u, alpha, fa.currents(alpha), 1.0});
      }
    }
    return out;
  }

  std::mt19937_64 rng(strategy.seed);
  out.reserve(strategy.count);
  for (std::size_t s = 0; s < strategy.count; ++s) {
    SccSample sample;
    sample.commitment.resize(ng);
    sample.alpha.resize(nc);
    for (std::size_t g = 0; g < ng; ++g) sample.commitment[g] = static_cast<int>(rng() >> 63);
    for (std::size_t c = 0; c < nc; ++c) sample.alpha[c] = alpha_grid[rng() % alpha_grid.size()];
    sample.currents = network::FaultAnalysis(grid, sample.commitment).currents(sample.alpha);
    out.push_back(std::move(sample));
  }
  return out;
}

std::pair<std::vector<SccSample>, std::vector<SccSample>> split_samples(
    std::vector<SccSample> samples, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw Error("train fraction must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  // Fisher-Yates with raw engine output so the order does not depend on the
  // standard library's distribution implementation.
  for (std::size_t i = samples.size(); i > 1; --i) {
    const std::size_t j = rng() % i;
    std::swap(samples[i - 1], samples[j]);
  }
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(samples.size())));
  std::vector<SccSample> train(std::make_move_iterator(samples.begin()),
                               std::make_move_iterator(samples.begin() + static_cast<std::ptrdiff_t>(n_train)));
  std::vector<SccSample> holdout(std::make_move_iterator(samples.begin() + static_cast<std::ptrdiff_t>(n_train)),
                                 std::make_move_iterator(samples.end()));
  return {std::move(train), std::move(holdout)};
}

}  // namespace sccuc::surrogate
