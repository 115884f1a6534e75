#include "wsr/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "network_simplex.hpp"

namespace wsr {

TransportPlan::TransportPlan(DiscreteMeasure source, DiscreteMeasure target,
                             double r, std::vector<Entry> entries)
    : source_(std::move(source)),
      target_(std::move(target)),
      r_(r),
      entries_(std::move(entries)) {
  require_same_space(source_, target_);
  for (const Entry& e : entries_)
    if (e.mass < 0) fail(errc::invalid_argument, "negative plan mass");
  cost_r_ = recompute_cost();
}

double TransportPlan::recompute_cost() const {
  const auto& space = *source_.space();
  double c = 0;
  for (const Entry& e : entries_)
    c += e.mass * std::pow(space.dist(e.source, e.target), r_);
  return c;
}

double TransportPlan::max_marginal_residual() const {
  const int m = source_.size();
  std::vector<double> row(m, 0.0), col(m, 0.0);
  for (const Entry& e : entries_) {
    row[e.source] += e.mass;
    col[e.target] += e.mass;
  }
  double res = 0;
  for (int i = 0; i < m; ++i) {
    res = std::max(res, std::abs(row[i] - source_.weight(i)));
    res = std::max(res, std::abs(col[i] - target_.weight(i)));
  }
  return res;
}

WassersteinResult wasserstein_exact(const DiscreteMeasure& p,
                                    const DiscreteMeasure& q, double r) {
  require_same_space(p, q);
  if (!(r >= 1)) fail(errc::invalid_argument, "wasserstein order r must be >= 1");
  const auto& space = *p.space();

  std::vector<TransportPlan::Entry> entries;
  std::vector<double> pw = p.weights(), qw = q.weights();

  // For r == 1 the cost is the metric itself and an optimal plan exists
  // that leaves the common mass min(p,q) in place; this shrinks the
  // solver instance to the excess/deficit supports.
  if (r == 1.0) {
    for (int i = 0; i < int(pw.size()); ++i) {
      const double c = std::min(pw[i], qw[i]);
      if (c > 0) entries.push_back({i, i, c});
      pw[i] -= c;
      qw[i] -= c;
    }
  }

  std::vector<int> src_idx, snk_idx;
  std::vector<double> supply, demand;
  for (int i = 0; i < int(pw.size()); ++i)
    if (pw[i] > 0) {
      src_idx.push_back(i);
      supply.push_back(pw[i]);
    }
  for (int j = 0; j < int(qw.size()); ++j)
    if (qw[j] > 0) {
      snk_idx.push_back(j);
      demand.push_back(qw[j]);
    }

  double total = 0;
  for (double v : supply) total += v;
  if (supply.empty() || demand.empty() || total <= 1e-15) {
    // Nothing left to move (P == Q after the common-mass reduction).
    TransportPlan plan(p, q, r, std::move(entries));
    return WassersteinResult{0.0, std::move(plan)};
  }

  const int m = int(supply.size()), n = int(demand.size());
  std::vector<double> cost(size_t(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      cost[size_t(i) * n + j] =
          (r == 1.0) ? space.dist(src_idx[i], snk_idx[j])
                     : std::pow(space.dist(src_idx[i], snk_idx[j]), r);

  detail::TransportSolution sol =
      detail::solve_transportation(supply, demand, cost);
  for (const auto& t : sol.flows)
    entries.push_back({src_idx[t.source], snk_idx[t.sink], t.flow});

  TransportPlan plan(p, q, r, std::move(entries));
  const double value = std::pow(plan.cost_r(), 1.0 / r);
  return WassersteinResult{value, std::move(plan)};
}

double wasserstein_1d(const DiscreteMeasure& p, const DiscreteMeasure& q,
                      double r) {
  require_same_space(p, q);
  if (!(r >= 1)) fail(errc::invalid_argument, "wasserstein order r must be >= 1");
  const std::vector<double> x = p.space()->line_embedding();

  // Quantile coupling: walk both CDFs in coordinate order, pairing mass.
  auto ordered_support = [&](const DiscreteMeasure& mu) {
    PointSet s = mu.support();
    std::sort(s.begin(), s.end(),
              [&](int a, int b) { return x[a] < x[b]; });
    return s;
  };
  const PointSet sp = ordered_support(p), sq = ordered_support(q);
  size_t ip = 0, iq = 0;
  double rp = p.weight(sp[0]), rq = q.weight(sq[0]);
  double acc = 0;
  while (true) {
    const double t = std::min(rp, rq);
    acc += t * std::pow(std::abs(x[sp[ip]] - x[sq[iq]]), r);
    rp -= t;
    rq -= t;
    if (rp <= 0) {
      if (++ip == sp.size()) break;
      rp = p.weight(sp[ip]);
    }
    if (rq <= 0) {
      if (++iq == sq.size()) break;
      rq = q.weight(sq[iq]);
    }
  }
  return std::pow(acc, 1.0 / r);
}

L1Tv l1_and_tv(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  require_same_space(p, q);
  double l1 = 0;
  for (int i = 0; i < p.size(); ++i) l1 += std::abs(p.weight(i) - q.weight(i));
  return L1Tv{l1, l1 / 2};
}

TransportPlan cell_coupling(const DiscreteMeasure& p, const DiscreteMeasure& q,
                            const Partition& s, double r) {
  require_same_space(p, q);
  if (s.space().get() != p.space().get())
    fail(errc::space_mismatch, "partition is over a different space");
  std::vector<TransportPlan::Entry> entries;
  for (int c = 0; c < s.cell_count(); ++c) {
    const PointSet& cell = s.cell(c);
    const double pm = p.mass_on(cell), qm = q.mass_on(cell);
    if (std::abs(pm - qm) > 1e-9)
      fail(errc::cell_mass_mismatch,
           "cell " + std::to_string(c) + " carries P-mass " +
               std::to_string(pm) + " but Q-mass " + std::to_string(qm));
    if (pm <= 0) continue;  // 0/0 = 0 convention
    for (int i : cell) {
      if (p.weight(i) <= 0) continue;
      for (int j : cell) {
        const double mass = p.weight(i) * q.weight(j) / pm;
        if (mass > 0) entries.push_back({i, j, mass});
      }
    }
  }
  return TransportPlan(p, q, r, std::move(entries));
}

SandwichBounds sandwich_bounds(const DiscreteMeasure& p,
                               const DiscreteMeasure& q, double r) {
  require_same_space(p, q);
  PointSet sup = p.support();
  for (int i : q.support()) sup.push_back(i);
  std::sort(sup.begin(), sup.end());
  sup.erase(std::unique(sup.begin(), sup.end()), sup.end());

  const double moved = l1_and_tv(p, q).l1 / 2;  // net mass that must move
  if (sup.size() < 2) {
    if (moved > 1e-12)
      fail(errc::degenerate_support,
           "distinct measures on a single-point support");
    return SandwichBounds{0, 0};
  }
  const auto& space = *p.space();
  return SandwichBounds{std::pow(space.separation(sup), r) * moved,
                        std::pow(space.diameter(sup), r) * moved};
}

BoundReport multires_upper_bound(const DiscreteMeasure& p,
                                 const DiscreteMeasure& q,
                                 const NestedSequence& levels, double r) {
  require_same_space(p, q);
  if (levels.level(0).cell_count() != 1)
    fail(errc::bad_level_zero, "coarsest level must be the single-cell partition");
  if (levels.level(0).space().get() != p.space().get())
    fail(errc::space_mismatch, "nested sequence is over a different space");

  const int top = levels.level_count() - 1;
  BoundReport report;
  report.aggregate = BoundReport::Aggregate::sum;
  report.terms.emplace_back("truncation",
                            std::pow(levels.resolution(top), r));
  for (int k = 1; k <= top; ++k) {
    double disagreement = 0;
    for (const PointSet& cell : levels.level(k).cells())
      disagreement += std::abs(p.mass_on(cell) - q.mass_on(cell));
    report.terms.emplace_back(
        "level " + std::to_string(k),
        std::pow(levels.resolution(k - 1), r) * disagreement);
  }
  report.params["r"] = std::to_string(r);
  report.params["levels"] = std::to_string(levels.level_count());
  report.value = report.recombine();
  return report;
}

ShellDecomposition shell_decompose(const DiscreteMeasure& p, int base_point,
                                   const std::vector<double>& radii) {
  const auto& space = *p.space();
  if (base_point < 0 || base_point >= space.size())
    fail(errc::invalid_argument, "base point out of range");
  if (radii.empty() || radii.front() != 0)
    fail(errc::bad_radii, "radii must start at 0");
  for (size_t k = 1; k < radii.size(); ++k)
    if (radii[k] < radii[k - 1])
      fail(errc::bad_radii, "radii must be non-decreasing");

  const int shells = int(radii.size());
  ShellDecomposition d;
  d.base_point = base_point;
  d.radii = radii;
  d.shells.assign(shells, {});
  d.shell_mass.assign(shells, 0.0);
  for (int x = 0; x < space.size(); ++x) {
    const double dist = space.dist(base_point, x);
    int k = shells - 1;
    while (k > 0 && dist < radii[k]) --k;
    d.shells[k].push_back(x);
    d.shell_mass[k] += p.weight(x);
  }
  for (int k = 0; k < shells; ++k) {
    if (d.shell_mass[k] > 0) {
      std::vector<double> w(space.size(), 0.0);
      for (int x : d.shells[k]) w[x] = p.weight(x) / d.shell_mass[k];
      d.conditionals.emplace_back(DiscreteMeasure(p.space(), std::move(w)));
    } else {
      d.conditionals.emplace_back(std::nullopt);  // 0/0 = 0
    }
  }
  return d;
}

}  // namespace wsr
