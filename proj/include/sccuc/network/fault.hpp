#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sccuc/network/grid.hpp"

namespace sccuc::network {

/// Nodal admittance for fault studies: series branch admittances plus a
/// shunt 1/(j x'') at the bus of every committed synchronous generator.
/// `commitment` holds one 0/1 entry per generator.
Eigen::MatrixXcd build_fault_admittance(const GridModel& grid, std::span<const int> commitment);

/// Bolted three-phase fault currents for one commitment state.
///
/// With at least one synchronous unit online the bus impedance matrix Z is
/// formed once and a fault at bus b draws
///
///   I_b = |1 / Z_bb| + sum_c |Z_bc| / |Z_bb| * kappa_c * alpha_c * I_rated_c
///
/// (pre-fault voltage 1.0 p.u.). With no synchronous unit online the faulted
/// bus is the only path to ground, so each IBR injection is pushed through
/// the network with bus b grounded and the resulting inflow at b is summed.
/// No source at all gives zero.
class FaultAnalysis {
 public:
  FaultAnalysis(const GridModel& grid, std::span<const int> commitment);

  bool has_sync_source() const { return has_sync_; }
  /// Z = Y^-1; empty when no synchronous unit is committed.
  const Eigen::MatrixXcd& impedance() const { return z_; }
  const Eigen::MatrixXcd& admittance() const { return y_; }

  /// Fault current at the bus in position `bus_pos` of grid.bus_ids.
  double current_at(std::size_t bus_pos, std::span<const double> alpha) const;
  /// Fault current at every bus, ordered like grid.bus_ids.
  std::vector<double> currents(std::span<const double> alpha) const;

 private:
  double ibr_current(std::size_t c, double alpha) const;

  const GridModel& grid_;
  Eigen::MatrixXcd y_;
  Eigen::MatrixXcd z_;
  bool has_sync_ = false;
  std::vector<std::size_t> ibr_pos_;
  // Transfer ratios used when no synchronous unit is online: ratio_(b, c).
  Eigen::MatrixXd islanded_ratio_;
};

/// Ground-truth short-circuit current (p.u.) at `bus_id`.
double scc_oracle(const GridModel& grid, std::span<const int> commitment,
                  std::span<const double> alpha, int bus_id);

}  // namespace sccuc::network
