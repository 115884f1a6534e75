#include "mincost_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace wsr::testing {

double oracle_transport_cost(const std::vector<double>& supply,
                             const std::vector<double>& demand,
                             const std::vector<double>& cost) {
  const int m = int(supply.size()), n = int(demand.size());
  std::vector<double> rem_s = supply, rem_d = demand;
  // Rescale demand so both sides sum to the same total.
  double sa = 0, sb = 0;
  for (double v : rem_s) sa += v;
  for (double v : rem_d) sb += v;
  for (double& v : rem_d) v *= sa / sb;

  // Potentials keep reduced costs nonnegative so Dijkstra applies.
  std::vector<double> pot_s(m, 0), pot_d(n, 0);
  std::vector<std::vector<double>> flow(m, std::vector<double>(n, 0.0));
  const double inf = std::numeric_limits<double>::infinity();
  double total = 0;

  const double kMassEps = 1e-12;  // mass below this is treated as settled
  while (true) {
    bool supply_left = false;
    for (int i = 0; i < m; ++i)
      if (rem_s[i] > kMassEps) supply_left = true;
    if (!supply_left) break;

    // Shortest residual path from the (implicit) super-source over all
    // sources with remaining supply to any sink with remaining demand.
    // Nodes: sources 0..m-1, sinks m..m+n-1.
    std::vector<double> dist_s(m, inf), dist_d(n, inf);
    std::vector<int> from_sink(n, -1), from_src(m, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (int i = 0; i < m; ++i)
      if (rem_s[i] > kMassEps) {
        dist_s[i] = 0;
        heap.push({0.0, i});
      }
    while (!heap.empty()) {
      const auto [d, node] = heap.top();
      heap.pop();
      if (node < m) {
        if (d > dist_s[node] + 1e-15) continue;
        for (int j = 0; j < n; ++j) {
          // Clamp float slop so Dijkstra sees nonnegative arc lengths.
          const double rc = std::max(
              0.0, cost[size_t(node) * n + j] - pot_s[node] - pot_d[j]);
          if (dist_s[node] + rc < dist_d[j] - 1e-15) {
            dist_d[j] = dist_s[node] + rc;
            from_sink[j] = node;
            heap.push({dist_d[j], m + j});
          }
        }
      } else {
        const int j = node - m;
        if (d > dist_d[j] + 1e-15) continue;
        for (int i = 0; i < m; ++i) {
          if (flow[i][j] <= kMassEps) continue;  // backward arc needs flow
          const double rc = std::max(
              0.0, -(cost[size_t(i) * n + j] - pot_s[i] - pot_d[j]));
          if (dist_d[j] + rc < dist_s[i] - 1e-15) {
            dist_s[i] = dist_d[j] + rc;
            from_src[i] = j;
            heap.push({dist_s[i], i});
          }
        }
      }
    }

    int best_sink = -1;
    for (int j = 0; j < n; ++j)
      if (rem_d[j] > kMassEps &&
          (best_sink < 0 || dist_d[j] < dist_d[best_sink]))
        best_sink = j;
    if (best_sink < 0 || !(dist_d[best_sink] < inf)) break;

    // Trace back to the path's source, collecting the bottleneck.
    int path_source = -1;
    double push = rem_d[best_sink];
    for (int j = best_sink; j >= 0;) {
      const int i = from_sink[j];
      const int prev_j = from_src[i];
      if (prev_j >= 0)
        push = std::min(push, flow[i][prev_j]);
      else
        path_source = i;
      j = prev_j;
    }
    push = std::min(push, rem_s[path_source]);
    if (!(push > kMassEps)) break;  // degenerate path, nothing left to route
    for (int j = best_sink; j >= 0;) {
      const int i = from_sink[j];
      flow[i][j] += push;
      const int prev_j = from_src[i];
      if (prev_j >= 0) {
        flow[i][prev_j] -= push;
        if (flow[i][prev_j] < kMassEps) flow[i][prev_j] = 0;
      }
      j = prev_j;
    }
    rem_s[path_source] -= push;
    rem_d[best_sink] -= push;

    // rc(i->j) = c - pot_s - pot_d, so the source side shifts down.
    for (int i = 0; i < m; ++i)
      if (dist_s[i] < inf) pot_s[i] -= dist_s[i];
    for (int j = 0; j < n; ++j)
      if (dist_d[j] < inf) pot_d[j] += dist_d[j];
  }

  total = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) total += flow[i][j] * cost[size_t(i) * n + j];
  return total;
}

double oracle_wasserstein(const DiscreteMeasure& p, const DiscreteMeasure& q,
                          double r) {
  const auto& space = *p.space();
  std::vector<int> src, snk;
  std::vector<double> supply, demand;
  for (int i = 0; i < p.size(); ++i) {
    if (p.weight(i) > 0) {
      src.push_back(i);
      supply.push_back(p.weight(i));
    }
    if (q.weight(i) > 0) {
      snk.push_back(i);
      demand.push_back(q.weight(i));
    }
  }
  const int m = int(src.size()), n = int(snk.size());
  std::vector<double> cost(size_t(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      cost[size_t(i) * n + j] = std::pow(space.dist(src[i], snk[j]), r);
  return std::pow(oracle_transport_cost(supply, demand, cost), 1.0 / r);
}

}  // namespace wsr::testing
