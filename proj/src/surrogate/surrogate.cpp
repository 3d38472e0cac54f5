#include "sccuc/surrogate/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "sccuc/detail/json_fields.hpp"
#include "sccuc/error.hpp"

namespace sccuc::surrogate {

using nlohmann::json;

std::vector<std::pair<std::size_t, std::size_t>> generator_pairs(std::size_t num_generators) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (num_generators > 1) out.reserve(num_generators * (num_generators - 1) / 2);
  for (std::size_t a = 0; a < num_generators; ++a) {
    for (std::size_t b = a + 1; b < num_generators; ++b) out.emplace_back(a, b);
  }
  return out;
}

std::vector<double> feature_row(std::span<const int> u, std::span<const double> alpha,
                                std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<double> row;
  row.reserve(u.size() + alpha.size() + pairs.size());
  for (int v : u) row.push_back(static_cast<double>(v));
  for (double a : alpha) row.push_back(a);
  for (const auto& [a, b] : pairs) row.push_back(static_cast<double>(u[a] * u[b]));
  return row;
}

std::size_t SccSurrogate::bus_position(int bus_id) const {
  auto it = std::find(bus_ids.begin(), bus_ids.end(), bus_id);
  if (it == bus_ids.end()) throw DimensionError("surrogate has no bus " + std::to_string(bus_id));
  return static_cast<std::size_t>(it - bus_ids.begin());
}

void SccSurrogate::check_matches(const network::GridModel& grid) const {
  if (bus_ids != grid.bus_ids) throw DimensionError("surrogate bus ids differ from the grid");
  if (generator_ids.size() != grid.num_generators() || ibr_ids.size() != grid.num_ibrs()) {
    throw DimensionError("surrogate generator/IBR counts differ from the grid");
  }
  for (std::size_t g = 0; g < generator_ids.size(); ++g) {
    if (generator_ids[g] != grid.generators[g].id) {
      throw DimensionError("surrogate generator '" + generator_ids[g] + "' does not match grid unit '" +
                           grid.generators[g].id + "'");
    }
  }
  for (std::size_t c = 0; c < ibr_ids.size(); ++c) {
    if (ibr_ids[c] != grid.ibrs[c].id) {
      throw DimensionError("surrogate IBR '" + ibr_ids[c] + "' does not match grid IBR '" +
                           grid.ibrs[c].id + "'");
    }
  }
}

double SccSurrogate::evaluate_at(std::size_t bus_pos, std::span<const int> u,
                                 std::span<const double> alpha) const {
  if (bus_pos >= num_buses()) throw DimensionError("bus position out of range");
  if (u.size() != num_generators() || alpha.size() != num_ibrs()) {
    throw DimensionError("state dimensions do not match the surrogate");
  }
  const auto& kg = k_g[bus_pos];
  const auto& kc = k_c[bus_pos];
  const auto& km = k_m[bus_pos];
  double value = 0.0;
  for (std::size_t g = 0; g < kg.size(); ++g) value += kg[g] * u[g];
  for (std::size_t c = 0; c < kc.size(); ++c) value += kc[c] * alpha[c];
  for (std::size_t m = 0; m < km.size(); ++m) value += km[m] * (u[pairs[m].first] * u[pairs[m].second]);
  if (shift_enabled) value -= conservative_shift[bus_pos];
  return value;
}

void SccSurrogate::enable_conservative_shift() {
  conservative_shift.assign(num_buses(), 0.0);
  for (std::size_t b = 0; b < num_buses(); ++b) {
    conservative_shift[b] = std::max(0.0, diagnostics[b].max_overestimate);
  }
  shift_enabled = true;
}

double evaluate_surrogate(const SccSurrogate& s, std::span<const int> u,
                          std::span<const double> alpha, int bus_id) {
  return s.evaluate_at(s.bus_position(bus_id), u, alpha);
}

namespace {

constexpr Eigen::Index kBlockRows = 4096;

// Fills a block of the weighted design matrix (rows scaled by sqrt(w)).
void fill_block(std::span<const SccSample> samples, std::size_t begin, std::size_t end,
                std::span<const std::pair<std::size_t, std::size_t>> pairs, Eigen::MatrixXd& x,
                Eigen::MatrixXd& y, bool weighted) {
  const auto rows = static_cast<Eigen::Index>(end - begin);
  const auto nb = static_cast<Eigen::Index>(samples[begin].currents.size());
  x.resize(rows, x.cols());
  y.resize(rows, nb);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& s = samples[begin + static_cast<std::size_t>(r)];
    const auto feats = feature_row(s.commitment, s.alpha, pairs);
    const double sw = weighted ? std::sqrt(s.weight) : 1.0;
    for (Eigen::Index f = 0; f < x.cols(); ++f) x(r, f) = sw * feats[static_cast<std::size_t>(f)];
    for (Eigen::Index b = 0; b < nb; ++b) y(r, b) = sw * s.currents[static_cast<std::size_t>(b)];
  }
}

void check_sample(const SccSample& s, std::size_t ng, std::size_t nc, std::size_t nb) {
  if (s.commitment.size() != ng || s.alpha.size() != nc || s.currents.size() != nb) {
    throw DimensionError("sample dimensions do not match the grid");
  }
  if (!(s.weight >= 0.0)) throw Error("sample weights must be >= 0");
}

// Diagnostics and normal-equation residual X'W(y - Xk) for every bus.
std::vector<FitDiagnostics> diagnose(const SccSurrogate& s, std::span<const SccSample> samples,
                                     const Eigen::MatrixXd& coef, Eigen::MatrixXd* normal_res,
                                     Eigen::MatrixXd* normal_rhs) {
  const auto nf = static_cast<Eigen::Index>(s.num_features());
  const auto nb = static_cast<Eigen::Index>(s.num_buses());
  std::vector<FitDiagnostics> diag(static_cast<std::size_t>(nb));
  std::vector<double> sse(static_cast<std::size_t>(nb), 0.0);
  std::vector<double> max_over(static_cast<std::size_t>(nb), -std::numeric_limits<double>::infinity());
  double wsum = 0.0;
  Eigen::MatrixXd res = Eigen::MatrixXd::Zero(nf, nb);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nf, nb);
  Eigen::MatrixXd x(0, nf), y;
  for (std::size_t begin = 0; begin < samples.size(); begin += kBlockRows) {
    const std::size_t end = std::min(samples.size(), begin + static_cast<std::size_t>(kBlockRows));
    fill_block(samples, begin, end, s.pairs, x, y, false);
    const Eigen::MatrixXd approx = x * coef;
    const Eigen::MatrixXd err = approx - y;
    Eigen::VectorXd w(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) w(r) = samples[begin + static_cast<std::size_t>(r)].weight;
    res.noalias() -= x.transpose() * (w.asDiagonal() * err);
    rhs.noalias() += x.transpose() * (w.asDiagonal() * y);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      wsum += w(r);
      for (Eigen::Index b = 0; b < nb; ++b) {
        const double e = err(r, b);
        auto& d = diag[static_cast<std::size_t>(b)];
        sse[static_cast<std::size_t>(b)] += w(r) * e * e;
        if (w(r) > 0.0) {
          d.max_abs_error = std::max(d.max_abs_error, std::abs(e));
          max_over[static_cast<std::size_t>(b)] = std::max(max_over[static_cast<std::size_t>(b)], e);
        }
      }
    }
  }
  for (Eigen::Index b = 0; b < nb; ++b) {
    auto& d = diag[static_cast<std::size_t>(b)];
    d.rmse = wsum > 0.0 ? std::sqrt(sse[static_cast<std::size_t>(b)] / wsum) : 0.0;
    d.max_overestimate = std::isfinite(max_over[static_cast<std::size_t>(b)]) ? max_over[static_cast<std::size_t>(b)] : 0.0;
    const double denom = rhs.col(b).norm();
    d.normal_residual = denom > 0.0 ? res.col(b).norm() / denom : res.col(b).norm();
  }
  if (normal_res != nullptr) *normal_res = std::move(res);
  if (normal_rhs != nullptr) *normal_rhs = std::move(rhs);
  return diag;
}

}  // namespace

SccSurrogate fit_surrogate(const network::GridModel& grid, std::span<const SccSample> samples,
                           const FitOptions& options) {
  SccSurrogate s;
  s.bus_ids = grid.bus_ids;
  for (const auto& g : grid.generators) s.generator_ids.push_back(g.id);
  for (const auto& c : grid.ibrs) s.ibr_ids.push_back(c.id);
  s.pairs = generator_pairs(grid.num_generators());

  const auto nf = static_cast<Eigen::Index>(s.num_features());
  const auto nb = static_cast<Eigen::Index>(s.num_buses());
  if (samples.empty()) throw RankDeficientError("no samples to fit");
  for (const auto& smp : samples) check_sample(smp, grid.num_generators(), grid.num_ibrs(), grid.num_buses());

  std::size_t distinct_rows = 0;
  for (const auto& smp : samples) {
    distinct_rows += smp.weight > 0.0 ? 1 : 0;
  }
  if (distinct_rows < s.num_features() && !options.allow_min_norm) {
    throw RankDeficientError("fit needs at least " + std::to_string(s.num_features()) +
                             " samples, got " + std::to_string(distinct_rows));
  }

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nf, nf);
  Eigen::MatrixXd x(0, nf), y;
  for (std::size_t begin = 0; begin < samples.size(); begin += kBlockRows) {
    const std::size_t end = std::min(samples.size(), begin + static_cast<std::size_t>(kBlockRows));
    fill_block(samples, begin, end, s.pairs, x, y, true);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  }
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(options.rank_tolerance);
  cod.compute(gram);
  if (cod.rank() < nf && !options.allow_min_norm) {
    throw RankDeficientError("design matrix is rank deficient (rank " + std::to_string(cod.rank()) +
                             " of " + std::to_string(nf) + " features)");
  }

  // Solve the normal equations from the residual form, with a few rounds of
  // refinement against the exact sample-wise residual.
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(nf, nb);
  s.k_g.assign(static_cast<std::size_t>(nb), {});
  s.k_c.assign(static_cast<std::size_t>(nb), {});
  s.k_m.assign(static_cast<std::size_t>(nb), {});
  Eigen::MatrixXd res, rhs;
  for (int round = 0; round < 4; ++round) {
    s.diagnostics = diagnose(s, samples, coef, &res, &rhs);
    double worst = 0.0;
    for (const auto& d : s.diagnostics) worst = std::max(worst, d.normal_residual);
    if (round > 0 && worst <= 1e-13) break;
    coef += cod.solve(res);
  }
  s.diagnostics = diagnose(s, samples, coef, nullptr, nullptr);

  const std::size_t ng = s.num_generators(), nc = s.num_ibrs(), np = s.num_pairs();
  for (Eigen::Index b = 0; b < nb; ++b) {
    const auto bi = static_cast<std::size_t>(b);
    for (std::size_t f = 0; f < ng; ++f) s.k_g[bi].push_back(coef(static_cast<Eigen::Index>(f), b));
    for (std::size_t f = 0; f < nc; ++f) s.k_c[bi].push_back(coef(static_cast<Eigen::Index>(ng + f), b));
    for (std::size_t f = 0; f < np; ++f) s.k_m[bi].push_back(coef(static_cast<Eigen::Index>(ng + nc + f), b));
  }
  s.conservative_shift.assign(static_cast<std::size_t>(nb), 0.0);
  return s;
}

ValidationReport validation_report(const SccSurrogate& s, std::span<const SccSample> holdout) {
  if (holdout.empty()) throw Error("holdout set is empty");
  ValidationReport report;
  const std::size_t nb = s.num_buses();
  report.per_bus.assign(nb, {});
  std::vector<double> sse(nb, 0.0);
  std::vector<double> max_over(nb, -std::numeric_limits<double>::infinity());
  double wsum = 0.0;
  std::vector<std::vector<double>> approx(holdout.size());
  for (std::size_t i = 0; i < holdout.size(); ++i) {
    const auto& smp = holdout[i];
    check_sample(smp, s.num_generators(), s.num_ibrs(), nb);
    approx[i].resize(nb);
    wsum += smp.weight;
    for (std::size_t b = 0; b < nb; ++b) {
      approx[i][b] = s.evaluate_at(b, smp.commitment, smp.alpha);
      const double e = approx[i][b] - smp.currents[b];
      sse[b] += smp.weight * e * e;
      if (smp.weight > 0.0) {
        report.per_bus[b].max_abs_error = std::max(report.per_bus[b].max_abs_error, std::abs(e));
        max_over[b] = std::max(max_over[b], e);
      }
    }
  }
  for (std::size_t b = 0; b < nb; ++b) {
    report.per_bus[b].rmse = wsum > 0.0 ? std::sqrt(sse[b] / wsum) : 0.0;
    report.per_bus[b].max_overestimate = std::isfinite(max_over[b]) ? max_over[b] : 0.0;
  }
  // Normal residual only has meaning for the unshifted fit.
  if (!s.shift_enabled) {
    Eigen::MatrixXd coef(static_cast<Eigen::Index>(s.num_features()), static_cast<Eigen::Index>(nb));
    for (std::size_t b = 0; b < nb; ++b) {
      std::size_t f = 0;
      for (double v : s.k_g[b]) coef(static_cast<Eigen::Index>(f++), static_cast<Eigen::Index>(b)) = v;
      for (double v : s.k_c[b]) coef(static_cast<Eigen::Index>(f++), static_cast<Eigen::Index>(b)) = v;
      for (double v : s.k_m[b]) coef(static_cast<Eigen::Index>(f++), static_cast<Eigen::Index>(b)) = v;
    }
    const auto diag = diagnose(s, holdout, coef, nullptr, nullptr);
    for (std::size_t b = 0; b < nb; ++b) report.per_bus[b].normal_residual = diag[b].normal_residual;
  }
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t i = 0; i < holdout.size(); ++i) {
      report.scatter.push_back({s.bus_ids[b], holdout[i].currents[b], approx[i][b]});
    }
  }
  return report;
}

void write_scatter_csv(const ValidationReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  out << "bus,actual,approx\n";
  for (const auto& row : report.scatter) out << row.bus << ',' << row.actual << ',' << row.approx << '\n';
}

void write_diagnostics_csv(const std::vector<int>& bus_ids,
                           const std::vector<FitDiagnostics>& diagnostics,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  out << "bus,rmse,max_abs_error,max_overestimate,normal_residual\n";
  for (std::size_t b = 0; b < diagnostics.size(); ++b) {
    const auto& d = diagnostics[b];
    out << bus_ids[b] << ',' << d.rmse << ',' << d.max_abs_error << ',' << d.max_overestimate << ','
        << d.normal_residual << '\n';
  }
}

json surrogate_to_json(const SccSurrogate& s) {
  json doc;
  doc["format"] = "sccuc-surrogate-1";
  doc["bus_ids"] = s.bus_ids;
  doc["generator_ids"] = s.generator_ids;
  doc["ibr_ids"] = s.ibr_ids;
  doc["pairs"] = json::array();
  for (const auto& [a, b] : s.pairs) doc["pairs"].push_back({a, b});
  doc["shift_enabled"] = s.shift_enabled;
  doc["buses"] = json::array();
  for (std::size_t b = 0; b < s.num_buses(); ++b) {
    const auto& d = s.diagnostics[b];
    doc["buses"].push_back({{"bus", s.bus_ids[b]},
                            {"k_g", s.k_g[b]},
                            {"k_c", s.k_c[b]},
                            {"k_m", s.k_m[b]},
                            {"conservative_shift", s.conservative_shift[b]},
                            {"rmse", d.rmse},
                            {"max_abs_error", d.max_abs_error},
                            {"max_overestimate", d.max_overestimate},
                            {"normal_residual", d.normal_residual}});
  }
  return doc;
}

SccSurrogate surrogate_from_json(const json& doc) {
  using detail::require;
  using detail::require_array;
  using detail::require_number;
  if (doc.value("format", std::string{}) != "sccuc-surrogate-1") {
    throw SchemaError("surrogate file: unsupported or missing 'format'");
  }
  SccSurrogate s;
  try {
    s.bus_ids = require(doc, "bus_ids", "surrogate").get<std::vector<int>>();
    s.generator_ids = require(doc, "generator_ids", "surrogate").get<std::vector<std::string>>();
    s.ibr_ids = require(doc, "ibr_ids", "surrogate").get<std::vector<std::string>>();
    for (const auto& p : require_array(doc, "pairs", "surrogate")) {
      s.pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
    }
    s.shift_enabled = require(doc, "shift_enabled", "surrogate").get<bool>();
    const auto& buses = require_array(doc, "buses", "surrogate");
    if (buses.size() != s.bus_ids.size()) throw SchemaError("surrogate: 'buses' length mismatch");
    for (std::size_t b = 0; b < buses.size(); ++b) {
      const std::string where = "surrogate.buses[" + std::to_string(b) + "]";
      const auto& e = buses[b];
      s.k_g.push_back(require(e, "k_g", where).get<std::vector<double>>());
      s.k_c.push_back(require(e, "k_c", where).get<std::vector<double>>());
      s.k_m.push_back(require(e, "k_m", where).get<std::vector<double>>());
      s.conservative_shift.push_back(require_number(e, "conservative_shift", where));
      FitDiagnostics d;
      d.rmse = require_number(e, "rmse", where);
      d.max_abs_error = require_number(e, "max_abs_error", where);
      d.max_overestimate = require_number(e, "max_overestimate", where);
      d.normal_residual = require_number(e, "normal_residual", where);
      s.diagnostics.push_back(d);
      if (s.k_g.back().size() != s.generator_ids.size() || s.k_c.back().size() != s.ibr_ids.size() ||
          s.k_m.back().size() != s.pairs.size()) {
        throw SchemaError(where + ": coefficient counts do not match ids/pairs");
      }
      if (s.conservative_shift.back() < 0.0) throw SchemaError(where + ".conservative_shift must be >= 0");
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("surrogate file: ") + e.what());
  }
  const std::size_t ng = s.generator_ids.size();
  if (s.pairs.size() != (ng > 1 ? ng * (ng - 1) / 2 : 0)) {
    throw SchemaError("surrogate file: pair set must hold every unordered generator pair");
  }
  return s;
}

void save_surrogate(const SccSurrogate& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << surrogate_to_json(s).dump(1) << '\n';
}

SccSurrogate load_surrogate(const std::filesystem::path& path) {
  return surrogate_from_json(detail::read_json_file(path));
}

}  // namespace sccuc::surrogate
