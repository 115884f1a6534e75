#pragma once

#include <vector>

#include "wsr/metric_space.hpp"

namespace wsr {

/// Nonempty, pairwise-disjoint cells covering the ground set.
class Partition {
 public:
  Partition(SpacePtr space, std::vector<PointSet> cells);

  static Partition whole_space(SpacePtr space);
  static Partition singletons(SpacePtr space);

  const SpacePtr& space() const noexcept { return space_; }
  int cell_count() const noexcept { return int(cells_.size()); }
  const std::vector<PointSet>& cells() const noexcept { return cells_; }
  const PointSet& cell(int i) const { return cells_[i]; }

  /// Index of the cell containing each point.
  const std::vector<int>& cell_of() const noexcept { return cell_of_; }

  /// Max cell diameter.
  double resolution() const;

  /// True if every cell of `finer` is contained in some cell of *this.
  bool is_refined_by(const Partition& finer) const;

 private:
  SpacePtr space_;
  std::vector<PointSet> cells_;
  std::vector<int> cell_of_;
};

/// Converts a cover into a partition: cell_i = cover_i minus earlier cells,
/// empty residuals dropped. The union of the cover must be the ground set.
Partition disjointify(SpacePtr space, const std::vector<PointSet>& cover);

/// Given partitions S and T of the same space, builds S' with
/// |S'| <= |S|, Res(S') <= Res(S) + 2 Res(T), and T refining S'.
Partition refine_coarsen(const Partition& s, const Partition& t);

/// Integer interval [lower, upper]; exact means lower == upper is the
/// true value.
struct CountBound {
  long long lower = 0;
  long long upper = 0;
  bool exact = false;
};

enum class SearchMode { exact, greedy };

/// Size gates for the exhaustive searches.
constexpr int kExactCoveringLimit = 12;
constexpr int kExactPackingLimit = 20;

/// Min number of cells in a partition of resolution <= eps.
/// Exact mode is exhaustive (size <= kExactCoveringLimit); greedy mode
/// returns [greedy packing lower bound, greedy partition size].
CountBound covering_number(const FiniteMetricSpace& space, double eps,
                           SearchMode mode);

/// Max size of a subset with separation >= eps. Exact mode is a pruned
/// subset search (size <= kExactPackingLimit); greedy mode returns
/// [farthest-point packing size, greedy covering upper bound at eps/2].
CountBound packing_number(const FiniteMetricSpace& space, double eps,
                          SearchMode mode);

/// A greedy partition witnessing covering_number's upper bound.
Partition greedy_covering_partition(SpacePtr space, double eps);

/// Farthest-point traversal order, seeded at point 0, ties to lowest index.
PointSet farthest_point_order(const FiniteMetricSpace& space);

struct PackingRadius {
  double value = 0;       // sup of Sep(S) over subsets of size >= n
  bool degenerate = false;  // n == 1: empty infimum, value is +inf
  bool exact = false;
};

/// Largest separation achievable by >= n points. Throws n_too_large when
/// n exceeds the space size.
PackingRadius packing_radius(const FiniteMetricSpace& space, int n,
                             SearchMode mode);

/// Coarse-to-fine refinement chain; level 0 is the single-cell partition.
class NestedSequence {
 public:
  explicit NestedSequence(std::vector<Partition> levels);

  int level_count() const noexcept { return int(levels_.size()); }
  const Partition& level(int k) const { return levels_[k]; }
  double resolution(int k) const { return resolutions_[k]; }

 private:
  std::vector<Partition> levels_;
  std::vector<double> resolutions_;
};

struct NestedBuildResult {
  NestedSequence sequence;
  std::vector<CountBound> level_counts;  // per level 1..K (index 0 = eps_1)
};

/// Builds levels 0..K: level 0 = {Omega}, level k built from an eps_k
/// partition, coarsened from finest upward via refine_coarsen so that
/// each level refines the previous one.
NestedBuildResult build_nested_sequence(SpacePtr space,
                                        const std::vector<double>& eps_seq);

}  // namespace wsr
