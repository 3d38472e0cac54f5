#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "paths.hpp"
#include "sccuc/error.hpp"
#include "sccuc/network/fault.hpp"
#include "sccuc/surrogate/surrogate.hpp"

using namespace sccuc;
using nlohmann::json;

namespace {

// Four units on three buses, two IBRs.
network::GridModel small_grid() {
  json gens = json::array();
  const int at[] = {1, 1, 2, 3};
  for (int g = 0; g < 4; ++g) {
    gens.push_back({{"id", "g" + std::to_string(g)}, {"bus", at[g]}, {"p_min", 5}, {"p_max", 50}, {"c_nl", 0},
                    {"c_m", 1}, {"k_st", 0}, {"k_sh", 0}, {"u0", 0}, {"x_subtransient", 0.3 + 0.1 * g}});
  }
  return network::parse_grid({{"name", "small"},
                              {"base_mva", 100},
                              {"scc_threshold_pu", 1.0},
                              {"buses", {{{"id", 1}}, {{"id", 2}}, {{"id", 3}}}},
                              {"branches", {{{"from", 1}, {"to", 2}, {"r", 0.01}, {"x", 0.1}},
                                            {{"from", 2}, {"to", 3}, {"r", 0.02}, {"x", 0.2}}}},
                              {"generators", gens},
                              {"ibrs", {{{"id", "w1"}, {"bus", 3}, {"p_max", 30}, {"fault_current_factor", 1.2}, {"rated_current_pu", 0.5}},
                                        {{"id", "w2"}, {"bus", 2}, {"p_max", 30}, {"fault_current_factor", 1.1}, {"rated_current_pu", 0.4}}}}});
}

double sse(const surrogate::SccSurrogate& s, const std::vector<surrogate::SccSample>& samples, std::size_t b) {
  double total = 0.0;
  for (const auto& smp : samples) {
    const double e = s.evaluate_at(b, smp.commitment, smp.alpha) - smp.currents[b];
    total += e * e;
  }
  return total;
}

}  // namespace

TEST_CASE("exhaustive sample count") {
  auto g = small_grid();
  g.generators.pop_back();
  g.ibrs.pop_back();
  g.validate();
  const auto samples = surrogate::generate_samples(g, surrogate::SamplingStrategy::exhaustive(), {0.0, 1.0});
  CHECK(samples.size() == 16);
  for (const auto& s : samples) {
    CHECK(s.commitment.size() == 3);
    CHECK(s.alpha.size() == 1);
    CHECK(s.currents.size() == 3);
    for (double v : s.currents) CHECK(v >= 0.0);
  }
}

TEST_CASE("exhaustive sampling refuses lattices above the cap") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  CHECK_THROWS(surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(1000)));
}

TEST_CASE("random sampling is reproducible from the seed") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  const auto a = surrogate::generate_samples(grid, surrogate::SamplingStrategy::random(500, 7));
  const auto b = surrogate::generate_samples(grid, surrogate::SamplingStrategy::random(500, 7));
  REQUIRE(a.size() == 500);
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    same = same && a[i].commitment == b[i].commitment && a[i].alpha == b[i].alpha && a[i].currents == b[i].currents;
  CHECK(same);
  const auto c = surrogate::generate_samples(grid, surrogate::SamplingStrategy::random(500, 8));
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].commitment != c[i].commitment;
  CHECK(differs);
}

TEST_CASE("split is deterministic and complete") {
  const auto grid = small_grid();
  const auto samples = surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(), {0.0, 1.0});
  const auto [tr, ho] = surrogate::split_samples(samples, 0.8, 7);
  const auto [tr2, ho2] = surrogate::split_samples(samples, 0.8, 7);
  CHECK(tr.size() == 51);
  CHECK(tr.size() + ho.size() == samples.size());
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr[i].commitment == tr2[i].commitment);
}

TEST_CASE("exactly linear data is recovered") {
  const auto grid = small_grid();
  auto samples = surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(), {0.0, 0.5, 1.0});
  const auto pairs = surrogate::generator_pairs(4);
  CHECK(pairs.size() == 6);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-2.0, 4.0);
  std::vector<std::vector<double>> truth(3, std::vector<double>(12));
  for (auto& row : truth)
    for (auto& v : row) v = unif(rng);
  for (auto& s : samples) {
    const auto f = surrogate::feature_row(s.commitment, s.alpha, pairs);
    for (std::size_t b = 0; b < 3; ++b) {
      s.currents[b] = 0.0;
      for (std::size_t j = 0; j < f.size(); ++j) s.currents[b] += truth[b][j] * f[j];
    }
  }
  const auto fit = surrogate::fit_surrogate(grid, samples);
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t g = 0; g < 4; ++g) CHECK(std::abs(fit.k_g[b][g] - truth[b][g]) <= 1e-9);
    for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(fit.k_c[b][c] - truth[b][4 + c]) <= 1e-9);
    for (std::size_t m = 0; m < 6; ++m) CHECK(std::abs(fit.k_m[b][m] - truth[b][6 + m]) <= 1e-9);
    CHECK(fit.diagnostics[b].max_abs_error <= 1e-9);
  }
}

TEST_CASE("duplicates weigh like explicit weights") {
  const auto grid = small_grid();
  const auto base = surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(), {0.0, 1.0});
  auto dup = base;
  auto weighted = base;
  for (std::size_t i = 0; i < 10; ++i) {
    dup.push_back(base[i * 3]);
    weighted[i * 3].weight = 2.0;
  }
  const auto a = surrogate::fit_surrogate(grid, dup);
  const auto b = surrogate::fit_surrogate(grid, weighted);
  for (std::size_t bus = 0; bus < 3; ++bus) {
    for (std::size_t g = 0; g < 4; ++g) CHECK(a.k_g[bus][g] == doctest::Approx(b.k_g[bus][g]).epsilon(1e-10));
    for (std::size_t m = 0; m < 6; ++m) CHECK(a.k_m[bus][m] == doctest::Approx(b.k_m[bus][m]).epsilon(1e-10));
  }
}

TEST_CASE("fit is a least-squares minimiser") {
  const auto grid = small_grid();
  const auto samples = surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(), {0.0, 0.5, 1.0});
  const auto fit = surrogate::fit_surrogate(grid, samples);
  for (std::size_t b = 0; b < 3; ++b) {
    const double best = sse(fit, samples, b);
    for (int which = 0; which < 3; ++which) {
      auto& coefs = which == 0 ? fit.k_g[b] : which == 1 ? fit.k_c[b] : fit.k_m[b];
      for (std::size_t j = 0; j < coefs.size(); ++j) {
        for (double d : {-1e-3, 1e-3}) {
          auto moved = fit;
          auto& v = which == 0 ? moved.k_g[b][j] : which == 1 ? moved.k_c[b][j] : moved.k_m[b][j];
          v += d;
          CHECK(sse(moved, samples, b) >= best);
        }
      }
    }
  }
}

TEST_CASE("rank-deficient designs are refused unless min-norm is requested") {
  const auto grid = small_grid();
  std::vector<surrogate::SccSample> samples;
  const std::vector<int> on(4, 1);
  const std::vector<double> a{1.0, 1.0};
  for (int k = 0; k < 30; ++k) samples.push_back({on, a, network::FaultAnalysis(grid, on).currents(a), 1.0});
  CHECK_THROWS_AS(surrogate::fit_surrogate(grid, samples), RankDeficientError);
  surrogate::FitOptions opt;
  opt.allow_min_norm = true;
  const auto s = surrogate::fit_surrogate(grid, samples, opt);
  CHECK(s.evaluate_at(0, on, a) == doctest::Approx(samples[0].currents[0]).epsilon(1e-9));
}

TEST_CASE("evaluation has no intercept and isolates single units") {
  const auto grid = small_grid();
  const auto fit = surrogate::fit_surrogate(
      grid, surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(), {0.0, 1.0}));
  const std::vector<int> off(4, 0);
  const std::vector<double> zero(2, 0.0);
  for (int bus : {1, 2, 3}) CHECK(surrogate::evaluate_surrogate(fit, off, zero, bus) == 0.0);
  for (std::size_t g = 0; g < 4; ++g) {
    std::vector<int> u(4, 0);
    u[g] = 1;
    CHECK(surrogate::evaluate_surrogate(fit, u, zero, 2) == fit.k_g[1][g]);
  }
  CHECK_THROWS_AS(surrogate::evaluate_surrogate(fit, std::vector<int>(3, 1), zero, 1), DimensionError);
}

TEST_CASE("conservative shift never overstates on the training lattice") {
  const auto grid = small_grid();
  const auto samples = surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(), {0.0, 0.5, 1.0});
  auto fit = surrogate::fit_surrogate(grid, samples);
  bool overstated = false;
  for (const auto& d : fit.diagnostics) overstated = overstated || d.max_overestimate > 0.0;
  CHECK(overstated);
  fit.enable_conservative_shift();
  for (const auto& s : samples)
    for (std::size_t b = 0; b < 3; ++b) CHECK(fit.evaluate_at(b, s.commitment, s.alpha) <= s.currents[b] + 1e-12);
  const auto rep = surrogate::validation_report(fit, samples);
  for (const auto& d : rep.per_bus) CHECK(d.max_overestimate <= 1e-12);
}

TEST_CASE("validation on the training set reproduces training diagnostics") {
  const auto grid = small_grid();
  const auto samples = surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(), {0.0, 0.5, 1.0});
  const auto fit = surrogate::fit_surrogate(grid, samples);
  const auto rep = surrogate::validation_report(fit, samples);
  REQUIRE(rep.per_bus.size() == 3);
  CHECK(rep.scatter.size() == 3 * samples.size());
  for (std::size_t b = 0; b < 3; ++b) {
    CHECK(rep.per_bus[b].rmse == doctest::Approx(fit.diagnostics[b].rmse).epsilon(1e-12));
    CHECK(rep.per_bus[b].max_abs_error == doctest::Approx(fit.diagnostics[b].max_abs_error).epsilon(1e-12));
    CHECK(rep.per_bus[b].max_overestimate == doctest::Approx(fit.diagnostics[b].max_overestimate).epsilon(1e-12));
  }
}

TEST_CASE("surrogate files round-trip bit-exactly") {
  const auto grid = small_grid();
  auto fit = surrogate::fit_surrogate(
      grid, surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(), {0.0, 0.5, 1.0}));
  fit.enable_conservative_shift();
  const auto dir = test::scratch("surrogate_roundtrip");
  surrogate::save_surrogate(fit, dir / "s.json");
  const auto back = surrogate::load_surrogate(dir / "s.json");
  CHECK(back.k_g == fit.k_g);
  CHECK(back.k_c == fit.k_c);
  CHECK(back.k_m == fit.k_m);
  CHECK(back.conservative_shift == fit.conservative_shift);
  CHECK(back.shift_enabled);
  CHECK(back.pairs == fit.pairs);
  CHECK_NOTHROW(back.check_matches(grid));
  auto other = grid;
  other.generators.pop_back();
  other.validate();
  CHECK_THROWS_AS(back.check_matches(other), DimensionError);
}

TEST_CASE("fixture fit: all-on value is the coefficient sum, residual is tiny, holdout snapshot") {
  const auto grid = network::load_grid(test::data("ieee30_grid.json"));
  const auto samples = surrogate::generate_samples(grid, surrogate::SamplingStrategy::exhaustive(), {0.0, 0.5, 1.0});
  CHECK(samples.size() == 4096 * 27);
  const auto [train, holdout] = surrogate::split_samples(samples, 0.8, 7);
  const auto fit = surrogate::fit_surrogate(grid, train);
  CHECK(fit.num_features() == 12 + 3 + 66);

  // bus 1 with everything on: plain sum of that row's coefficients
  const std::vector<int> on(12, 1);
  const std::vector<double> full(3, 1.0);
  double sum = 0.0;
  for (double v : fit.k_g[0]) sum += v;
  for (double v : fit.k_c[0]) sum += v;
  for (double v : fit.k_m[0]) sum += v;
  CHECK(surrogate::evaluate_surrogate(fit, on, full, 1) == doctest::Approx(sum).epsilon(1e-12));

  for (const auto& d : fit.diagnostics) CHECK(d.normal_residual <= 1e-8);

  const auto rep = surrogate::validation_report(fit, holdout);
  double worst_rmse = 0.0, worst_abs = 0.0;
  for (const auto& d : rep.per_bus) {
    worst_rmse = std::max(worst_rmse, d.rmse);
    worst_abs = std::max(worst_abs, d.max_abs_error);
  }
  // regression baseline frozen from the first run
  CHECK(worst_rmse == doctest::Approx(0.092094102591788518).epsilon(1e-8));
  CHECK(worst_abs == doctest::Approx(0.79804301906431085).epsilon(1e-8));

  const auto dir = test::scratch("surrogate_fixture");
  surrogate::write_scatter_csv(rep, dir / "scatter.csv");
  std::ifstream f(dir / "scatter.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "bus,actual,approx");
}
