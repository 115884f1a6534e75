#include "wsr/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace wsr {

Partition::Partition(SpacePtr space, std::vector<PointSet> cells)
    : space_(std::move(space)), cells_(std::move(cells)) {
  if (!space_) fail(errc::invalid_argument, "null space");
  const int m = space_->size();
  cell_of_.assign(m, -1);
  for (size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].empty())
      fail(errc::invalid_argument, "partition cell is empty");
    for (int p : cells_[c]) {
      if (p < 0 || p >= m)
        fail(errc::invalid_argument, "partition point out of range");
      if (cell_of_[p] != -1)
        fail(errc::invalid_argument, "partition cells are not disjoint");
      cell_of_[p] = int(c);
    }
  }
  for (int p = 0; p < m; ++p)
    if (cell_of_[p] == -1)
      fail(errc::invalid_argument, "partition does not cover the space");
}

Partition Partition::whole_space(SpacePtr space) {
  PointSet all = space->all_points();
  return Partition(std::move(space), {all});
}

Partition Partition::singletons(SpacePtr space) {
  std::vector<PointSet> cells;
  for (int i = 0; i < space->size(); ++i) cells.push_back({i});
  return Partition(std::move(space), std::move(cells));
}

double Partition::resolution() const {
  double r = 0;
  for (const auto& c : cells_) r = std::max(r, space_->diameter(c));
  return r;
}

bool Partition::is_refined_by(const Partition& finer) const {
  for (const auto& t : finer.cells()) {
    const int host = cell_of_[t.front()];
    for (int p : t)
      if (cell_of_[p] != host) return false;
  }
  return true;
}

Partition disjointify(SpacePtr space, const std::vector<PointSet>& cover) {
  const int m = space->size();
  std::vector<bool> taken(m, false);
  std::vector<PointSet> cells;
  for (const auto& c : cover) {
    PointSet cell;
    for (int p : c) {
      if (p < 0 || p >= m)
        fail(errc::invalid_argument, "cover point out of range");
      if (!taken[p]) {
        taken[p] = true;
        cell.push_back(p);
      }
    }
    if (!cell.empty()) cells.push_back(std::move(cell));
  }
  for (int p = 0; p < m; ++p)
    if (!taken[p])
      fail(errc::incomplete_cover, "cover misses point " + std::to_string(p));
  return Partition(space, std::move(cells));
}

Partition refine_coarsen(const Partition& s, const Partition& t) {
  if (s.space().get() != t.space().get())
    fail(errc::space_mismatch, "partitions of different spaces");
  std::vector<bool> t_taken(t.cell_count(), false);
  std::vector<PointSet> cells;
  for (const auto& si : s.cells()) {
    // T-cells meeting S_i that were not swallowed by an earlier output cell.
    std::vector<bool> mark(t.cell_count(), false);
    for (int p : si) mark[t.cell_of()[p]] = true;
    PointSet cell;
    for (int c = 0; c < t.cell_count(); ++c)
      if (mark[c] && !t_taken[c]) {
        t_taken[c] = true;
        cell.insert(cell.end(), t.cell(c).begin(), t.cell(c).end());
      }
    if (!cell.empty()) {
      std::sort(cell.begin(), cell.end());
      cells.push_back(std::move(cell));
    }
  }
  return Partition(s.space(), std::move(cells));
}

namespace {

// Exhaustive minimum partition into cells of diameter <= eps, via
// subset DP over bitmasks. Feasible up to kExactCoveringLimit points.
long long exact_covering_count(const FiniteMetricSpace& space, double eps) {
  const int m = space.size();
  const int full = (1 << m) - 1;
  std::vector<double> diam(size_t(full) + 1, 0.0);
  for (int mask = 1; mask <= full; ++mask) {
    const int i = std::countr_zero(unsigned(mask));
    const int rest = mask & (mask - 1);
    double d = diam[rest];
    for (int r = rest; r; r &= r - 1)
      d = std::max(d, space.dist(i, std::countr_zero(unsigned(r))));
    diam[mask] = d;
  }
  const long long inf = std::numeric_limits<long long>::max() / 2;
  std::vector<long long> best(size_t(full) + 1, inf);
  best[0] = 0;
  for (int mask = 1; mask <= full; ++mask) {
    const int low = mask & -mask;
    for (int sub = mask; sub; sub = (sub - 1) & mask)
      if ((sub & low) && diam[sub] <= eps)
        best[mask] = std::min(best[mask], best[mask ^ sub] + 1);
  }
  return best[full];
}

// Pruned search for the maximum eps-separated subset.
struct PackingSearch {
  const FiniteMetricSpace& space;
  double eps;
  long long best = 0;

  void run(std::vector<int>& chosen, const std::vector<int>& candidates) {
    best = std::max(best, (long long)chosen.size());
    if ((long long)(chosen.size() + candidates.size()) <= best) return;
    for (size_t idx = 0; idx < candidates.size(); ++idx) {
      if ((long long)(chosen.size() + candidates.size() - idx) <= best) return;
      const int v = candidates[idx];
      std::vector<int> next;
      for (size_t j = idx + 1; j < candidates.size(); ++j)
        if (space.dist(v, candidates[j]) >= eps) next.push_back(candidates[j]);
      chosen.push_back(v);
      run(chosen, next);
      chosen.pop_back();
    }
  }
};

long long exact_packing_count(const FiniteMetricSpace& space, double eps) {
  PackingSearch s{space, eps};
  std::vector<int> chosen;
  s.run(chosen, space.all_points());
  return s.best;
}

struct GreedyPacking {
  PointSet order;
  std::vector<double> insert_dist;  // insert_dist[0] = +inf
};

GreedyPacking greedy_packing(const FiniteMetricSpace& space) {
  const int m = space.size();
  GreedyPacking g;
  std::vector<double> mind(m, std::numeric_limits<double>::infinity());
  std::vector<bool> used(m, false);
  int cur = 0;
  for (int step = 0; step < m; ++step) {
    g.order.push_back(cur);
    g.insert_dist.push_back(step == 0
                                ? std::numeric_limits<double>::infinity()
                                : mind[cur]);
    used[cur] = true;
    int next = -1;
    double best = -1;
    for (int p = 0; p < m; ++p) {
      if (used[p]) continue;
      mind[p] = std::min(mind[p], space.dist(cur, p));
      if (mind[p] > best) {
        best = mind[p];
        next = p;
      }
    }
    cur = next;
  }
  return g;
}

// Size of the largest farthest-point prefix with separation >= eps
// (strict > eps when certifying a covering-number lower bound).
long long greedy_packing_size(const FiniteMetricSpace& space, double eps,
                              bool strict) {
  GreedyPacking g = greedy_packing(space);
  long long n = 0;
  for (size_t i = 0; i < g.order.size(); ++i) {
    const double d = g.insert_dist[i];
    if (i > 0 && !(strict ? d > eps : d >= eps)) break;
    ++n;
  }
  return n;
}

}  // namespace

Partition greedy_covering_partition(SpacePtr space, double eps) {
  const int m = space->size();
  std::vector<bool> assigned(m, false);
  std::vector<PointSet> cells;
  for (int seed = 0; seed < m; ++seed) {
    if (assigned[seed]) continue;
    PointSet cell{seed};
    assigned[seed] = true;
    for (int p = seed + 1; p < m; ++p) {
      if (assigned[p]) continue;
      bool fits = true;
      for (int q : cell)
        if (space->dist(p, q) > eps) {
          fits = false;
          break;
        }
      if (fits) {
        cell.push_back(p);
        assigned[p] = true;
      }
    }
    cells.push_back(std::move(cell));
  }
  return Partition(std::move(space), std::move(cells));
}

PointSet farthest_point_order(const FiniteMetricSpace& space) {
  return greedy_packing(space).order;
}

CountBound covering_number(const FiniteMetricSpace& space, double eps,
                           SearchMode mode) {
  if (!(eps > 0)) fail(errc::invalid_argument, "eps must be > 0");
  if (mode == SearchMode::exact) {
    if (space.size() > kExactCoveringLimit)
      fail(errc::exact_mode_too_large,
           "exact covering limited to " +
               std::to_string(kExactCoveringLimit) + " points");
    const long long n = exact_covering_count(space, eps);
    return CountBound{n, n, true};
  }
  const long long upper = greedy_covering_partition(
                              std::make_shared<FiniteMetricSpace>(space), eps)
                              .cell_count();
  const long long lower =
      std::min(upper, greedy_packing_size(space, eps, /*strict=*/true));
  return CountBound{std::max<long long>(lower, 1), upper, lower == upper};
}

CountBound packing_number(const FiniteMetricSpace& space, double eps,
                          SearchMode mode) {
  if (!(eps > 0)) fail(errc::invalid_argument, "eps must be > 0");
  if (mode == SearchMode::exact) {
    if (space.size() > kExactPackingLimit)
      fail(errc::exact_mode_too_large,
           "exact packing limited to " + std::to_string(kExactPackingLimit) +
               " points");
    const long long n = exact_packing_count(space, eps);
    return CountBound{n, n, true};
  }
  const long long lower = greedy_packing_size(space, eps, /*strict=*/false);
  const long long upper = std::max(
      lower,
      (long long)greedy_covering_partition(
          std::make_shared<FiniteMetricSpace>(space), eps / 2)
          .cell_count());
  return CountBound{lower, upper, lower == upper};
}

PackingRadius packing_radius(const FiniteMetricSpace& space, int n,
                             SearchMode mode) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  if (n > space.size())
    fail(errc::n_too_large, "n exceeds space size " +
                                std::to_string(space.size()));
  if (n == 1)
    return PackingRadius{std::numeric_limits<double>::infinity(), true, true};

  if (mode == SearchMode::greedy) {
    GreedyPacking g = greedy_packing(space);
    double sep = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) sep = std::min(sep, g.insert_dist[i]);
    return PackingRadius{sep, false, false};
  }

  // R(n) = max { d : M(d) >= n } over the pairwise distances, since
  // Sep(S) is always attained at some pair.
  std::vector<double> dists;
  for (int i = 0; i < space.size(); ++i)
    for (int j = i + 1; j < space.size(); ++j)
      dists.push_back(space.dist(i, j));
  std::sort(dists.begin(), dists.end());
  dists.erase(std::unique(dists.begin(), dists.end()), dists.end());
  // M(d) is non-increasing in d; binary search for the largest feasible d.
  int lo = 0, hi = int(dists.size()) - 1, ans = -1;
  while (lo <= hi) {
    const int mid = (lo + hi) / 2;
    if (packing_number(space, dists[mid], SearchMode::exact).lower >= n) {
      ans = mid;
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  if (ans < 0)
    fail(errc::solver_failure, "no feasible packing radius");  // unreachable
  return PackingRadius{dists[ans], false, true};
}

NestedSequence::NestedSequence(std::vector<Partition> levels)
    : levels_(std::move(levels)) {
  if (levels_.empty()) fail(errc::invalid_argument, "empty nested sequence");
  for (size_t k = 0; k + 1 < levels_.size(); ++k)
    if (!levels_[k].is_refined_by(levels_[k + 1]))
      fail(errc::invalid_argument,
           "level " + std::to_string(k + 1) + " does not refine level " +
               std::to_string(k));
  for (const auto& p : levels_) resolutions_.push_back(p.resolution());
}

NestedBuildResult build_nested_sequence(SpacePtr space,
                                        const std::vector<double>& eps_seq) {
  if (eps_seq.empty()) fail(errc::invalid_argument, "empty eps sequence");
  for (size_t i = 0; i < eps_seq.size(); ++i) {
    if (!(eps_seq[i] > 0))
      fail(errc::invalid_argument, "eps values must be positive");
    if (i > 0 && eps_seq[i] > eps_seq[i - 1])
      fail(errc::not_non_increasing, "eps sequence must be non-increasing");
  }
  const int levels = int(eps_seq.size());
  std::vector<Partition> lvl;
  std::vector<CountBound> counts;
  lvl.push_back(Partition::whole_space(space));
  for (int k = 0; k < levels; ++k) {
    Partition p = greedy_covering_partition(space, eps_seq[k]);
    counts.push_back(CountBound{
        std::min<long long>(p.cell_count(),
                            greedy_packing_size(*space, eps_seq[k], true)),
        p.cell_count(), false});
    lvl.push_back(std::move(p));
  }
  // Coarsen from finest upward so each coarser level is nested with the
  // already-fixed finer one.
  for (int k = levels - 1; k >= 1; --k)
    lvl[k] = refine_coarsen(lvl[k], lvl[k + 1]);
  return NestedBuildResult{NestedSequence(std::move(lvl)), std::move(counts)};
}

}  // namespace wsr
