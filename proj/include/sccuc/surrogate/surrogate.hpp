#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sccuc/network/grid.hpp"
#include "sccuc/surrogate/sampling.hpp"

namespace sccuc::surrogate {

struct FitDiagnostics {
  double rmse = 0.0;
  double max_abs_error = 0.0;
  // max(approx - actual); positive values mean the surrogate overstates SCC.
  double max_overestimate = 0.0;
  // ||X'W(y - Xk)|| / ||X'Wy|| on the data the diagnostics were computed from.
  double normal_residual = 0.0;
};

/// Per-bus linear fault-current model
///
///   I_b ~ sum_g k_bg u_g + sum_c k_bc alpha_c + sum_m k_bm u_g1 u_g2
///
/// with one pair term for every unordered generator pair and no intercept.
struct SccSurrogate {
  std::vector<int> bus_ids;
  std::vector<std::string> generator_ids;
  std::vector<std::string> ibr_ids;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  // Indexed [bus position][unit / ibr / pair].
  std::vector<std::vector<double>> k_g;
  std::vector<std::vector<double>> k_c;
  std::vector<std::vector<double>> k_m;

  std::vector<FitDiagnostics> diagnostics;  // training set, per bus
  std::vector<double> conservative_shift;   // per bus, >= 0
  bool shift_enabled = false;

  std::size_t num_buses() const { return bus_ids.size(); }
  std::size_t num_generators() const { return generator_ids.size(); }
  std::size_t num_ibrs() const { return ibr_ids.size(); }
  std::size_t num_pairs() const { return pairs.size(); }
  std::size_t num_features() const { return num_generators() + num_ibrs() + num_pairs(); }

  std::size_t bus_position(int bus_id) const;
  /// Throws DimensionError when ids or counts differ from the grid.
  void check_matches(const network::GridModel& grid) const;

  /// Surrogate current at a bus position (shift applied when enabled).
  double evaluate_at(std::size_t bus_pos, std::span<const int> u, std::span<const double> alpha) const;

  /// Sets the per-bus shift to max(0, training max overestimate) and enables it.
  void enable_conservative_shift();
};

/// Unordered generator pairs (g1 < g2) in lexicographic order.
std::vector<std::pair<std::size_t, std::size_t>> generator_pairs(std::size_t num_generators);

/// Feature row [u | alpha | u_g1 u_g2] for one state.
std::vector<double> feature_row(std::span<const int> u, std::span<const double> alpha,
                                std::span<const std::pair<std::size_t, std::size_t>> pairs);

struct FitOptions {
  // Accept a rank-deficient design and return the minimum-norm solution.
  bool allow_min_norm = false;
  // Relative pivot threshold used for the rank decision.
  double rank_tolerance = 1e-10;
};

/// Weighted least squares per bus on the oracle currents. Throws
/// RankDeficientError when the design is rank deficient and min-norm
/// fitting was not requested.
SccSurrogate fit_surrogate(const network::GridModel& grid, std::span<const SccSample> samples,
                           const FitOptions& options = {});

/// Left-hand side of the adequacy constraint at `bus_id`.
double evaluate_surrogate(const SccSurrogate& s, std::span<const int> u,
                          std::span<const double> alpha, int bus_id);

struct ScatterRow {
  int bus = 0;
  double actual = 0.0;
  double approx = 0.0;
};

struct ValidationReport {
  std::vector<FitDiagnostics> per_bus;
  std::vector<ScatterRow> scatter;  // grouped by bus, then sample order
};

ValidationReport validation_report(const SccSurrogate& s, std::span<const SccSample> holdout);

/// bus,actual,approx table.
void write_scatter_csv(const ValidationReport& report, const std::filesystem::path& path);
/// bus,rmse,max_abs_error,max_overestimate,normal_residual table.
void write_diagnostics_csv(const std::vector<int>& bus_ids,
                           const std::vector<FitDiagnostics>& diagnostics,
                           const std::filesystem::path& path);

nlohmann::json surrogate_to_json(const SccSurrogate& s);
SccSurrogate surrogate_from_json(const nlohmann::json& doc);
void save_surrogate(const SccSurrogate& s, const std::filesystem::path& path);
SccSurrogate load_surrogate(const std::filesystem::path& path);

}  // namespace sccuc::surrogate
