#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wsr/metric_space.hpp"
#include "wsr/partition.hpp"
#include "wsr/report.hpp"

namespace wsr {

/// A coupling between two measures on the same space, stored sparsely.
class TransportPlan {
 public:
  struct Entry {
    int source = 0;
    int target = 0;
    double mass = 0;
  };

  TransportPlan(DiscreteMeasure source, DiscreteMeasure target, double r,
                std::vector<Entry> entries);

  const DiscreteMeasure& source() const noexcept { return source_; }
  const DiscreteMeasure& target() const noexcept { return target_; }
  double r() const noexcept { return r_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// Sum of mass * dist^r, as reported at construction.
  double cost_r() const noexcept { return cost_r_; }

  /// Recomputes cost_r from the mass table.
  double recompute_cost() const;

  /// Max absolute deviation of row/column sums from the marginals.
  double max_marginal_residual() const;

  static constexpr double kMarginalTol = 1e-9;

 private:
  DiscreteMeasure source_;
  DiscreteMeasure target_;
  double r_;
  std::vector<Entry> entries_;
  double cost_r_;
};

struct WassersteinResult {
  double value = 0;  // W_r = (min cost)^{1/r}
  TransportPlan plan;
};

/// Exact r-Wasserstein distance and an optimal plan, via a network
/// simplex on the bipartite support graph. Optimality is certified by a
/// dual feasibility scan at termination.
WassersteinResult wasserstein_exact(const DiscreteMeasure& p,
                                    const DiscreteMeasure& q, double r);

/// Closed-form W_r on line-embeddable spaces (quantile coupling);
/// independent of the exact solver.
double wasserstein_1d(const DiscreteMeasure& p, const DiscreteMeasure& q,
                      double r);

struct L1Tv {
  double l1 = 0;
  double tv = 0;
};

L1Tv l1_and_tv(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// The within-cell conditionally-independent coupling. Requires
/// P(cell) == Q(cell) on every cell; the plan's cost certifies
/// W_r(P,Q) <= Res(S).
TransportPlan cell_coupling(const DiscreteMeasure& p, const DiscreteMeasure& q,
                            const Partition& s, double r);

struct SandwichBounds {
  double lo = 0;  // Sep(support)^r * l1/2
  double hi = 0;  // Diam(support)^r * l1/2
};

/// Lower and upper bounds on W_r^r from the joint support's separation
/// and diameter. The moved-mass factor is l1/2: any coupling moves at
/// least that much mass off the diagonal, and a coupling exists moving
/// exactly that much.
SandwichBounds sandwich_bounds(const DiscreteMeasure& p,
                               const DiscreteMeasure& q, double r);

/// Multi-resolution upper bound on W_r^r over a nested sequence whose
/// level 0 is the single-cell partition:
/// Res(S_K)^r + sum_k Res(S_{k-1})^r * sum_{S in S_k} |P(S) - Q(S)|.
BoundReport multires_upper_bound(const DiscreteMeasure& p,
                                 const DiscreteMeasure& q,
                                 const NestedSequence& levels, double r);

/// Spherical-shell decomposition around a base point.
struct ShellDecomposition {
  int base_point = 0;
  std::vector<double> radii;                // w_0 = 0 <= w_1 <= ...
  std::vector<PointSet> shells;             // B_k = [w_k, w_{k+1}), last open
  std::vector<double> shell_mass;           // P(B_k)
  std::vector<std::optional<DiscreteMeasure>> conditionals;  // nullopt if 0
};

ShellDecomposition shell_decompose(const DiscreteMeasure& p, int base_point,
                                   const std::vector<double>& radii);

}  // namespace wsr
