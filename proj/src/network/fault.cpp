#include "sccuc/network/fault.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "sccuc/error.hpp"

namespace sccuc::network {

using cplx = std::complex<double>;

Eigen::MatrixXcd build_fault_admittance(const GridModel& grid, std::span<const int> commitment) {
  if (commitment.size() != grid.num_generators()) {
    throw DimensionError("commitment has " + std::to_string(commitment.size()) +
                         " entries, grid has " + std::to_string(grid.num_generators()) +
                         " generators");
  }
  const auto n = static_cast<Eigen::Index>(grid.num_buses());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& br : grid.branches) {
    const auto a = static_cast<Eigen::Index>(grid.bus_index(br.from));
    const auto b = static_cast<Eigen::Index>(grid.bus_index(br.to));
    const cplx ys = 1.0 / cplx(br.r, br.x);
    y(a, a) += ys;
    y(b, b) += ys;
    y(a, b) -= ys;
    y(b, a) -= ys;
  }
  for (std::size_t g = 0; g < commitment.size(); ++g) {
    if (commitment[g] == 0) continue;
    const auto& sg = grid.generators[g];
    const auto k = static_cast<Eigen::Index>(grid.bus_index(sg.bus));
    y(k, k) += 1.0 / cplx(0.0, sg.x_subtransient);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y.row(i).cwiseAbs().maxCoeff() == 0.0) {
      throw DegenerateNetworkError("admittance row for bus " + std::to_string(grid.bus_ids[i]) +
                                   " is all zero");
    }
  }
  return y;
}

FaultAnalysis::FaultAnalysis(const GridModel& grid, std::span<const int> commitment)
    : grid_(grid), y_(build_fault_admittance(grid, commitment)) {
  for (int u : commitment) has_sync_ = has_sync_ || u != 0;
  for (const auto& c : grid.ibrs) ibr_pos_.push_back(grid.bus_index(c.bus));

  const auto n = y_.rows();
  if (has_sync_) {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(y_);
    if (!lu.isInvertible()) throw DegenerateNetworkError("fault admittance matrix is singular");
    z_ = lu.inverse();
    return;
  }

  const auto nc = static_cast<Eigen::Index>(ibr_pos_.size());
  islanded_ratio_ = Eigen::MatrixXd::Zero(n, nc);
  if (nc == 0) return;
  for (Eigen::Index b = 0; b < n; ++b) {
    // Ground bus b and drop it from the nodal equations.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != b) keep.push_back(k);
    }
    const auto m = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXcd reduced(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) reduced(i, j) = y_(keep[i], keep[j]);
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(reduced);
    const bool solvable = m > 0 && lu.isInvertible();
    for (Eigen::Index c = 0; c < nc; ++c) {
      const auto src = static_cast<Eigen::Index>(ibr_pos_[c]);
      if (src == b) {
        islanded_ratio_(b, c) = 1.0;
        continue;
      }
      if (!solvable) continue;
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
      rhs(src < b ? src : src - 1) = 1.0;
      const Eigen::VectorXcd v = lu.solve(rhs);
      cplx inflow = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) inflow += y_(b, keep[j]) * v(j);
      islanded_ratio_(b, c) = std::abs(inflow);
    }
  }
}

double FaultAnalysis::ibr_current(std::size_t c, double alpha) const {
  const auto& ibr = grid_.ibrs[c];
  return ibr.fault_current_factor * alpha * ibr.rated_current;
}

double FaultAnalysis::current_at(std::size_t bus_pos, std::span<const double> alpha) const {
  if (alpha.size() != grid_.num_ibrs()) {
    throw DimensionError("alpha has " + std::to_string(alpha.size()) + " entries, grid has " +
                         std::to_string(grid_.num_ibrs()) + " IBRs");
  }
  if (bus_pos >= grid_.num_buses()) throw DimensionError("bus position out of range");
  const auto b = static_cast<Eigen::Index>(bus_pos);
  if (has_sync_) {
    const double zbb = std::abs(z_(b, b));
    double current = 1.0 / zbb;
    for (std::size_t c = 0; c < ibr_pos_.size(); ++c) {
      const auto k = static_cast<Eigen::Index>(ibr_pos_[c]);
      current += std::abs(z_(b, k)) / zbb * ibr_current(c, alpha[c]);
    }
    return current;
  }
  double current = 0.0;
  for (std::size_t c = 0; c < ibr_pos_.size(); ++c) {
    const double inj = ibr_current(c, alpha[c]);
    if (inj == 0.0) continue;
    current += islanded_ratio_(b, static_cast<Eigen::Index>(c)) * inj;
  }
  return current;
}

std::vector<double> FaultAnalysis::currents(std::span<const double> alpha) const {
  std::vector<double> out(grid_.num_buses());
  for (std::size_t b = 0; b < out.size(); ++b) out[b] = current_at(b, alpha);
  return out;
}

double scc_oracle(const GridModel& grid, std::span<const int> commitment,
                  std::span<const double> alpha, int bus_id) {
  const std::size_t pos = grid.bus_index(bus_id);
  return FaultAnalysis(grid, commitment).current_at(pos, alpha);
}

}  // namespace sccuc::network
