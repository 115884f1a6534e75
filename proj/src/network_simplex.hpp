#pragma once

// Dense transportation-problem network simplex. Internal to the library;
// the public surface is wasserstein_exact().

#include <cstddef>
#include <vector>

namespace wsr::detail {

struct TransportTriplet {
  int source = 0;
  int sink = 0;
  double flow = 0;
};

struct TransportSolution {
  std::vector<TransportTriplet> flows;  // strictly positive entries only
  double cost = 0;
  double dual_gap = 0;  // most negative reduced cost at termination (>= 0 ok)
};

/// Solves min sum c(i,j) x(i,j) s.t. row sums = supply, column sums =
/// demand, x >= 0. Supplies and demands must be positive and balanced
/// (demands are rescaled internally to match the supply total). `cost`
/// is row-major supply.size() x demand.size(). Throws wsr::error with
/// errc::solver_failure if optimality cannot be certified.
TransportSolution solve_transportation(const std::vector<double>& supply,
                                       const std::vector<double>& demand,
                                       const std::vector<double>& cost);

}  // namespace wsr::detail
