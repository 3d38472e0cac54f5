#include "sccuc/solver/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCore>

#include "sccuc/solver/basis_factor.hpp"

namespace sccuc::solver {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
    case LpStatus::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kDegenerateSwitch = 60;

double pow2_near(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(v))));
}

enum class Phase { kOptimal, kInfeasible, kUnbounded, kLimit, kTrouble, kDualInfeasible };

}  // namespace

struct SimplexSolver::Impl {
  LpOptions opt;
  const MilpProblem* problem = nullptr;
  std::size_t n = 0, m = 0, nt = 0;

  // Scaled constraint matrix, column-major.
  std::vector<int> col_start, row_idx;
  std::vector<double> val;
  std::vector<double> col_scale, row_scale;
  double obj_scale = 1.0;

  std::vector<double> cost;              // size nt
  std::vector<double> root_lb, root_ub;  // size nt, scaled
  std::vector<double> lb, ub;

  std::vector<double> x;
  std::vector<VarStatus> status;
  std::vector<int> head;
  std::vector<int> where;  // basis position or -1
  BasisFactor factor;
  std::vector<double> d;   // reduced costs of the phase-2 objective
  std::vector<double> ray;
  std::size_t iterations = 0;
  std::size_t limit = 0;

  explicit Impl(const MilpProblem& p, LpOptions o) : opt(o), problem(&p) {
    n = p.num_cols();
    m = p.num_rows();
    nt = n + m;
    build_scaled();
    limit = opt.iteration_limit != 0 ? opt.iteration_limit : 20 * nt + 10000;
  }

  void build_scaled() {
    const auto& vars = problem->variables();
    const auto& rows = problem->constraints();
    std::vector<std::vector<std::pair<int, double>>> cols(n);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& t : rows[i].terms) cols[static_cast<std::size_t>(t.col)].emplace_back(static_cast<int>(i), t.coef);
    }
    row_scale.assign(m, 1.0);
    col_scale.assign(n, 1.0);
    // Geometric scaling passes, rounded to powers of two so scaling is exact.
    for (int pass = 0; pass < 3; ++pass) {
      std::vector<double> rmin(m, std::numeric_limits<double>::infinity()), rmax(m, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        for (const auto& [i, a] : cols[j]) {
          const double v = std::abs(a) * col_scale[j];
          rmin[static_cast<std::size_t>(i)] = std::min(rmin[static_cast<std::size_t>(i)], v);
          rmax[static_cast<std::size_t>(i)] = std::max(rmax[static_cast<std::size_t>(i)], v);
        }
      }
      for (std::size_t i = 0; i < m; ++i) {
        if (rmax[i] > 0.0) row_scale[i] = pow2_near(1.0 / std::sqrt(rmin[i] * rmax[i]));
      }
      for (std::size_t j = 0; j < n; ++j) {
        double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
        for (const auto& [i, a] : cols[j]) {
          const double v = std::abs(a) * row_scale[static_cast<std::size_t>(i)];
          cmin = std::min(cmin, v);
          cmax = std::max(cmax, v);
        }
        if (cmax > 0.0) col_scale[j] = pow2_near(1.0 / std::sqrt(cmin * cmax));
      }
    }
    col_start.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) {
      col_start[j + 1] = col_start[j] + static_cast<int>(cols[j].size());
      for (const auto& [i, a] : cols[j]) {
        row_idx.push_back(i);
        val.push_back(a * row_scale[static_cast<std::size_t>(i)] * col_scale[j]);
      }
    }
    cost.assign(nt, 0.0);
    double cmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) cmax = std::max(cmax, std::abs(vars[j].obj * col_scale[j]));
    obj_scale = cmax > 0.0 ? pow2_near(1.0 / cmax) : 1.0;
    for (std::size_t j = 0; j < n; ++j) cost[j] = vars[j].obj * col_scale[j] * obj_scale;

    root_lb.assign(nt, 0.0);
    root_ub.assign(nt, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      root_lb[j] = vars[j].lb / col_scale[j];
      root_ub[j] = vars[j].ub / col_scale[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      const auto& r = rows[i];
      const double rhs = r.rhs * row_scale[i];
      root_lb[n + i] = r.sense == Sense::kLe ? -kInf : rhs;
      root_ub[n + i] = r.sense == Sense::kGe ? kInf : rhs;
    }
    lb = root_lb;
    ub = root_ub;
  }

  // ---- column access -------------------------------------------------------

  double dot_col(std::size_t j, const Eigen::VectorXd& y) const {
    if (j >= n) return -y(static_cast<Eigen::Index>(j - n));
    double s = 0.0;
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) s += val[static_cast<std::size_t>(k)] * y(row_idx[static_cast<std::size_t>(k)]);
    return s;
  }

  void load_col(std::size_t j, Eigen::VectorXd& v) const {
    v.setZero(static_cast<Eigen::Index>(m));
    if (j >= n) {
      v(static_cast<Eigen::Index>(j - n)) = -1.0;
      return;
    }
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) v(row_idx[static_cast<std::size_t>(k)]) = val[static_cast<std::size_t>(k)];
  }

  bool is_fixed(std::size_t j) const { return lb[j] == ub[j]; }
  bool can_increase(std::size_t j) const { return status[j] == VarStatus::kLower || status[j] == VarStatus::kFree; }
  bool can_decrease(std::size_t j) const { return status[j] == VarStatus::kUpper || status[j] == VarStatus::kFree; }

  // ---- basis management ----------------------------------------------------

  void slack_basis() {
    status.assign(nt, VarStatus::kLower);
    head.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      head[i] = static_cast<int>(n + i);
      status[n + i] = VarStatus::kBasic;
    }
  }

  void normalize_nonbasic() {
    for (std::size_t j = 0; j < nt; ++j) {
      if (status[j] == VarStatus::kBasic) continue;
      const bool lf = std::isfinite(lb[j]), uf = std::isfinite(ub[j]);
      if (status[j] == VarStatus::kLower && !lf) status[j] = uf ? VarStatus::kUpper : VarStatus::kFree;
      if (status[j] == VarStatus::kUpper && !uf) status[j] = lf ? VarStatus::kLower : VarStatus::kFree;
      if (status[j] == VarStatus::kFree && lf) status[j] = VarStatus::kLower;
      if (status[j] == VarStatus::kFree && uf) status[j] = VarStatus::kUpper;
      if (is_fixed(j)) status[j] = VarStatus::kLower;
    }
  }

  void place_nonbasic() {
    x.resize(nt);
    for (std::size_t j = 0; j < nt; ++j) {
      switch (status[j]) {
        case VarStatus::kLower: x[j] = lb[j]; break;
        case VarStatus::kUpper: x[j] = ub[j]; break;
        case VarStatus::kFree: x[j] = 0.0; break;
        case VarStatus::kBasic: break;
      }
    }
  }

  bool refactor() {
    where.assign(nt, -1);
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t r = 0; r < m; ++r) {
      const auto k = static_cast<std::size_t>(head[r]);
      where[k] = static_cast<int>(r);
      if (k >= n) {
        trip.emplace_back(static_cast<int>(k - n), static_cast<int>(r), -1.0);
      } else {
        for (int p = col_start[k]; p < col_start[k + 1]; ++p) {
          trip.emplace_back(row_idx[static_cast<std::size_t>(p)], static_cast<int>(r), val[static_cast<std::size_t>(p)]);
        }
      }
    }
    if (m == 0) return true;
    Eigen::SparseMatrix<double> b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    b.setFromTriplets(trip.begin(), trip.end());
    b.makeCompressed();
    return factor.factorize(b);
  }

  void ftran(Eigen::VectorXd& v) const {
    if (m != 0) factor.ftran(v);
  }
  void btran(Eigen::VectorXd& v) const {
    if (m != 0) factor.btran(v);
  }

  void compute_primal() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < nt; ++j) {
      if (status[j] == VarStatus::kBasic || x[j] == 0.0) continue;
      if (j >= n) {
        rhs(static_cast<Eigen::Index>(j - n)) += x[j];
      } else {
        for (int p = col_start[j]; p < col_start[j + 1]; ++p) rhs(row_idx[static_cast<std::size_t>(p)]) -= val[static_cast<std::size_t>(p)] * x[j];
      }
    }
    ftran(rhs);
    for (std::size_t r = 0; r < m; ++r) x[static_cast<std::size_t>(head[r])] = rhs(static_cast<Eigen::Index>(r));
  }

  Eigen::VectorXd phase2_duals() const {
    Eigen::VectorXd y(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) y(static_cast<Eigen::Index>(r)) = cost[static_cast<std::size_t>(head[r])];
    btran(y);
    return y;
  }

  void compute_reduced_costs() {
    const Eigen::VectorXd y = phase2_duals();
    d.assign(nt, 0.0);
    for (std::size_t j = 0; j < nt; ++j) {
      if (status[j] != VarStatus::kBasic) d[j] = cost[j] - dot_col(j, y);
    }
  }

  double infeasibility(std::size_t k) const {
    if (x[k] < lb[k] - opt.feasibility_tol) return lb[k] - x[k];
    if (x[k] > ub[k] + opt.feasibility_tol) return x[k] - ub[k];
    return 0.0;
  }

  double max_primal_infeasibility() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < m; ++r) worst = std::max(worst, infeasibility(static_cast<std::size_t>(head[r])));
    return worst;
  }

  double max_dual_infeasibility() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      if (status[j] == VarStatus::kBasic || is_fixed(j)) continue;
      if (can_increase(j)) worst = std::max(worst, -d[j]);
      if (can_decrease(j)) worst = std::max(worst, d[j]);
    }
    return worst;
  }

  // Flips boxed nonbasics whose reduced cost has the wrong sign. Returns false
  // when a wrong-signed variable has no opposite bound.
  bool make_dual_feasible() {
    bool flipped = false;
    for (std::size_t j = 0; j < nt; ++j) {
      if (status[j] == VarStatus::kBasic || is_fixed(j)) continue;
      const double tol = opt.optimality_tol;
      if (status[j] == VarStatus::kFree) {
        if (std::abs(d[j]) > tol) return false;
      } else if (status[j] == VarStatus::kLower && d[j] < -tol) {
        if (!std::isfinite(ub[j])) return false;
        status[j] = VarStatus::kUpper;
        x[j] = ub[j];
        flipped = true;
      } else if (status[j] == VarStatus::kUpper && d[j] > tol) {
        if (!std::isfinite(lb[j])) return false;
        status[j] = VarStatus::kLower;
        x[j] = lb[j];
        flipped = true;
      }
    }
    if (flipped) compute_primal();
    return true;
  }

  bool maybe_refactor() {
    if (factor.num_updates() < static_cast<std::size_t>(opt.refactor_interval)) return true;
    if (!refactor()) return false;
    compute_primal();
    return true;
  }

  void pivot(std::size_t r, std::size_t q, const Eigen::VectorXd& alpha) {
    const auto leaving = static_cast<std::size_t>(head[r]);
    where[leaving] = -1;
    head[r] = static_cast<int>(q);
    where[q] = static_cast<int>(r);
    status[q] = VarStatus::kBasic;
    factor.update(static_cast<int>(r), alpha);
  }

  // ---- primal simplex ------------------------------------------------------

  Phase primal() {
    const double tol_p = opt.feasibility_tol;
    const double tol_d = opt.optimality_tol;
    int degenerate_run = 0;
    Eigen::VectorXd y(static_cast<Eigen::Index>(m)), alpha;
    while (true) {
      if (iterations >= limit) return Phase::kLimit;
      if (!maybe_refactor()) return Phase::kTrouble;

      bool phase1 = false;
      for (std::size_t r = 0; r < m; ++r) {
        const auto k = static_cast<std::size_t>(head[r]);
        double c;
        if (x[k] < lb[k] - tol_p) {
          c = -1.0;
          phase1 = true;
        } else if (x[k] > ub[k] + tol_p) {
          c = 1.0;
          phase1 = true;
        } else {
          c = cost[k];
        }
        y(static_cast<Eigen::Index>(r)) = c;
      }
      if (phase1) {
        for (std::size_t r = 0; r < m; ++r) {
          const auto k = static_cast<std::size_t>(head[r]);
          if (infeasibility(k) == 0.0) y(static_cast<Eigen::Index>(r)) = 0.0;
        }
      }
      btran(y);

      const bool bland = degenerate_run > kDegenerateSwitch;
      std::size_t q = nt;
      double best = 0.0, dq = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        if (status[j] == VarStatus::kBasic || is_fixed(j)) continue;
        const double dj = (phase1 ? 0.0 : cost[j]) - dot_col(j, y);
        double score = 0.0;
        if (can_increase(j) && dj < -tol_d) score = -dj;
        if (can_decrease(j) && dj > tol_d) score = dj;
        if (score <= 0.0) continue;
        if (bland) {
          q = j;
          dq = dj;
          break;
        }
        if (score > best) {
          best = score;
          q = j;
          dq = dj;
        }
      }
      if (q == nt) return phase1 ? Phase::kInfeasible : Phase::kOptimal;

      const double dir = dq < 0.0 ? 1.0 : -1.0;
      load_col(q, alpha);
      ftran(alpha);

      // Harris two-pass ratio test.
      const double flip = ub[q] - lb[q];
      double theta_max = flip;
      auto breakpoint = [&](std::size_t r, double& bound, bool relaxed) -> double {
        const double a = alpha(static_cast<Eigen::Index>(r));
        if (std::abs(a) <= kPivotTol) return kInf;
        const double delta = -dir * a;
        const auto k = static_cast<std::size_t>(head[r]);
        const double v = x[k];
        const double slack = relaxed ? tol_p : 0.0;
        if (delta < 0.0) {
          if (phase1 && v > ub[k] + tol_p) {
            bound = ub[k];
          } else if (v >= lb[k] - tol_p && std::isfinite(lb[k])) {
            bound = lb[k];
          } else {
            return kInf;
          }
          return std::max(0.0, (v - bound + slack) / (-delta));
        }
        if (phase1 && v < lb[k] - tol_p) {
          bound = lb[k];
        } else if (v <= ub[k] + tol_p && std::isfinite(ub[k])) {
          bound = ub[k];
        } else {
          return kInf;
        }
        return std::max(0.0, (bound - v + slack) / delta);
      };
      double bound = 0.0;
      for (std::size_t r = 0; r < m; ++r) theta_max = std::min(theta_max, breakpoint(r, bound, true));
      if (!std::isfinite(theta_max)) {
        if (phase1) return Phase::kTrouble;
        ray.assign(n, 0.0);
        if (q < n) ray[q] = dir * col_scale[q];
        for (std::size_t r = 0; r < m; ++r) {
          const auto k = static_cast<std::size_t>(head[r]);
          if (k < n) ray[k] = -dir * alpha(static_cast<Eigen::Index>(r)) * col_scale[k];
        }
        return Phase::kUnbounded;
      }
      std::size_t leave = m;
      double leave_bound = 0.0, theta = 0.0, best_abs = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        double b = 0.0;
        const double t = breakpoint(r, b, false);
        if (t <= theta_max) {
          const double a = std::abs(alpha(static_cast<Eigen::Index>(r)));
          const bool better = bland ? (leave == m || head[r] < head[leave]) : a > best_abs;
          if (better) {
            best_abs = a;
            leave = r;
            leave_bound = b;
            theta = t;
          }
        }
      }
      const bool bound_flip = leave == m || (std::isfinite(flip) && flip <= theta);
      if (bound_flip) theta = flip;

      degenerate_run = theta * std::abs(dq) <= 1e-12 ? degenerate_run + 1 : 0;
      ++iterations;
      x[q] += dir * theta;
      for (std::size_t r = 0; r < m; ++r) {
        x[static_cast<std::size_t>(head[r])] -= dir * alpha(static_cast<Eigen::Index>(r)) * theta;
      }
      if (bound_flip) {
        status[q] = dir > 0 ? VarStatus::kUpper : VarStatus::kLower;
        x[q] = dir > 0 ? ub[q] : lb[q];
        continue;
      }
      const auto k = static_cast<std::size_t>(head[leave]);
      x[k] = leave_bound;
      status[k] = (leave_bound == lb[k]) ? VarStatus::kLower : VarStatus::kUpper;
      pivot(leave, q, alpha);
    }
  }

  // ---- dual simplex --------------------------------------------------------

  Phase dual() {
    const double tol_d = opt.optimality_tol;
    Eigen::VectorXd rho, alpha;
    std::vector<double> row(nt, 0.0);
    while (true) {
      if (iterations >= limit) return Phase::kLimit;
      if (!maybe_refactor()) return Phase::kTrouble;
      compute_reduced_costs();
      if (max_dual_infeasibility() > 1e3 * tol_d) return Phase::kDualInfeasible;

      std::size_t r = m;
      double worst = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double v = infeasibility(static_cast<std::size_t>(head[i]));
        if (v > worst) {
          worst = v;
          r = i;
        }
      }
      if (r == m) return Phase::kOptimal;

      const auto k = static_cast<std::size_t>(head[r]);
      const bool below = x[k] < lb[k];
      const double target = below ? lb[k] : ub[k];
      rho.setZero(static_cast<Eigen::Index>(m));
      rho(static_cast<Eigen::Index>(r)) = 1.0;
      btran(rho);

      double theta_max = kInf;
      for (std::size_t j = 0; j < nt; ++j) {
        row[j] = 0.0;
        if (status[j] == VarStatus::kBasic || is_fixed(j)) continue;
        const double a = dot_col(j, rho);
        row[j] = a;
        if (std::abs(a) <= kPivotTol) continue;
        const bool eligible = below ? ((can_increase(j) && a < 0.0) || (can_decrease(j) && a > 0.0))
                                    : ((can_increase(j) && a > 0.0) || (can_decrease(j) && a < 0.0));
        if (!eligible) continue;
        theta_max = std::min(theta_max, (std::abs(d[j]) + tol_d) / std::abs(a));
      }
      if (!std::isfinite(theta_max)) return Phase::kInfeasible;
      std::size_t q = nt;
      double best_abs = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        const double a = row[j];
        if (std::abs(a) <= kPivotTol || status[j] == VarStatus::kBasic || is_fixed(j)) continue;
        const bool eligible = below ? ((can_increase(j) && a < 0.0) || (can_decrease(j) && a > 0.0))
                                    : ((can_increase(j) && a > 0.0) || (can_decrease(j) && a < 0.0));
        if (!eligible) continue;
        if (std::abs(d[j]) / std::abs(a) <= theta_max && std::abs(a) > best_abs) {
          best_abs = std::abs(a);
          q = j;
        }
      }
      if (q == nt) return Phase::kInfeasible;

      load_col(q, alpha);
      ftran(alpha);
      const double arq = alpha(static_cast<Eigen::Index>(r));
      if (std::abs(arq - row[q]) > 1e-6 * (1.0 + std::abs(arq)) || std::abs(arq) <= kPivotTol) {
        // Factor drifted; rebuild and try again.
        if (factor.num_updates() == 0) return Phase::kTrouble;
        if (!refactor()) return Phase::kTrouble;
        compute_primal();
        continue;
      }
      const double step = (x[k] - target) / arq;
      ++iterations;
      x[q] += step;
      for (std::size_t i = 0; i < m; ++i) {
        x[static_cast<std::size_t>(head[i])] -= alpha(static_cast<Eigen::Index>(i)) * step;
      }
      x[k] = target;
      status[k] = (target == lb[k]) ? VarStatus::kLower : VarStatus::kUpper;
      pivot(r, q, alpha);
    }
  }

  // ---- driver --------------------------------------------------------------

  bool fresh_state() {
    if (!refactor()) return false;
    place_nonbasic();
    compute_primal();
    compute_reduced_costs();
    return true;
  }

  LpResult solve(const SimplexBasis* warm) {
    iterations = 0;
    ray.clear();
    const bool use_warm = warm != nullptr && warm->status.size() == nt && warm->head.size() == m;
    if (use_warm) {
      status = warm->status;
      head = warm->head;
    } else {
      slack_basis();
    }
    normalize_nonbasic();
    if (!fresh_state()) {
      slack_basis();
      normalize_nonbasic();
      if (!fresh_state()) return finish(LpStatus::kNumericalFailure);
    }

    for (int attempt = 0; attempt < 6; ++attempt) {
      Phase ph = Phase::kDualInfeasible;
      if (make_dual_feasible()) ph = dual();
      if (ph == Phase::kDualInfeasible || ph == Phase::kTrouble) {
        if (ph == Phase::kTrouble && !fresh_state()) {
          slack_basis();
          normalize_nonbasic();
          if (!fresh_state()) return finish(LpStatus::kNumericalFailure);
        }
        ph = primal();
      }
      switch (ph) {
        case Phase::kLimit: return finish(LpStatus::kIterationLimit);
        case Phase::kUnbounded: return finish(LpStatus::kUnbounded);
        case Phase::kInfeasible: {
          // Confirm on a fresh factorization before declaring infeasible.
          if (!fresh_state()) return finish(LpStatus::kNumericalFailure);
          if (max_primal_infeasibility() == 0.0) continue;
          if (attempt < 2 && primal() != Phase::kInfeasible) continue;
          return finish(LpStatus::kInfeasible);
        }
        case Phase::kOptimal: {
          if (!fresh_state()) return finish(LpStatus::kNumericalFailure);
          if (max_primal_infeasibility() == 0.0 && max_dual_infeasibility() <= 10.0 * opt.optimality_tol) {
            return finish(LpStatus::kOptimal);
          }
          continue;
        }
        case Phase::kTrouble:
        case Phase::kDualInfeasible: {
          slack_basis();
          normalize_nonbasic();
          if (!fresh_state()) return finish(LpStatus::kNumericalFailure);
          continue;
        }
      }
    }
    return finish(LpStatus::kNumericalFailure);
  }

  LpResult finish(LpStatus st) {
    LpResult res;
    res.status = st;
    res.iterations = iterations;
    res.x.assign(n, 0.0);
    if (x.size() == nt) {
      for (std::size_t j = 0; j < n; ++j) res.x[j] = x[j] * col_scale[j];
    }
    if (st == LpStatus::kOptimal) {
      // Snap values that sit within tolerance of a bound.
      const auto& vars = problem->variables();
      for (std::size_t j = 0; j < n; ++j) {
        const double lo = std::max(vars[j].lb, lb[j] * col_scale[j]);
        const double hi = std::min(vars[j].ub, ub[j] * col_scale[j]);
        double& v = res.x[j];
        v = std::clamp(v, lo, hi);
        // degenerate basics carry round-off noise
        if (std::isfinite(lo) && v - lo <= 1e-12 * std::max(1.0, std::abs(lo))) v = lo;
        if (std::isfinite(hi) && hi - v <= 1e-12 * std::max(1.0, std::abs(hi))) v = hi;
      }
      const Eigen::VectorXd y = phase2_duals();
      res.duals.resize(m);
      for (std::size_t i = 0; i < m; ++i) res.duals[i] = y(static_cast<Eigen::Index>(i)) * row_scale[i] / obj_scale;
      res.reduced_costs.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        res.reduced_costs[j] = (status[j] == VarStatus::kBasic ? 0.0 : d[j]) / (obj_scale * col_scale[j]);
      }
    }
    if (st == LpStatus::kUnbounded) res.ray = ray;
    res.row_activity.resize(m);
    for (std::size_t i = 0; i < m; ++i) res.row_activity[i] = problem->row_activity(i, res.x);
    res.objective = problem->objective_value(res.x);
    return res;
  }
};

SimplexSolver::SimplexSolver(const MilpProblem& problem, LpOptions options)
    : impl_(std::make_unique<Impl>(problem, options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

void SimplexSolver::set_column_bounds(std::size_t col, double lb, double ub) {
  impl_->lb[col] = lb / impl_->col_scale[col];
  impl_->ub[col] = ub / impl_->col_scale[col];
}

void SimplexSolver::restore_bounds() {
  impl_->lb = impl_->root_lb;
  impl_->ub = impl_->root_ub;
}

double SimplexSolver::column_lb(std::size_t col) const { return impl_->lb[col] * impl_->col_scale[col]; }
double SimplexSolver::column_ub(std::size_t col) const { return impl_->ub[col] * impl_->col_scale[col]; }

LpResult SimplexSolver::solve(const SimplexBasis* warm) { return impl_->solve(warm); }

SimplexBasis SimplexSolver::basis() const { return {impl_->status, impl_->head}; }

LpResult solve_lp(const MilpProblem& problem, const LpOptions& options) {
  SimplexSolver solver(problem, options);
  return solver.solve();
}

}  // namespace sccuc::solver
