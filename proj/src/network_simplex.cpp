#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wsr/error.hpp"

namespace wsr::detail {

namespace {

struct Simplex {
  int m, n, nodes;
  const std::vector<double>& cost;  // m x n row-major
  std::vector<double> a, b;

  struct Arc {
    int src, snk;  // source index in [0,m), sink index in [0,n)
    double flow;
    bool active;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adj;  // node -> active arc ids
  std::vector<int> parent, parent_arc, depth, order;
  std::vector<double> pot;  // u on sources (node i), v on sinks (node m+j)

  double tol;

  Simplex(std::vector<double> a_, std::vector<double> b_,
          const std::vector<double>& c)
      : m(int(a_.size())),
        n(int(b_.size())),
        nodes(m + n),
        cost(c),
        a(std::move(a_)),
        b(std::move(b_)),
        adj(nodes),
        parent(nodes),
        parent_arc(nodes),
        depth(nodes),
        order(nodes),
        pot(nodes) {
    double cmax = 0;
    for (double v : cost) cmax = std::max(cmax, std::abs(v));
    tol = 1e-10 * std::max(1.0, cmax);
  }

  int sink_node(int j) const { return m + j; }

  int add_basic(int i, int j, double f) {
    const int id = int(arcs.size());
    arcs.push_back(Arc{i, j, f, true});
    adj[i].push_back(id);
    adj[sink_node(j)].push_back(id);
    return id;
  }

  // Northwest-corner start: exactly m + n - 1 basic arcs.
  void init_basis() {
    int i = 0, j = 0;
    double ra = a[0], rb = b[0];
    while (true) {
      const double t = std::min(ra, rb);
      add_basic(i, j, t);
      ra -= t;
      rb -= t;
      if (i == m - 1 && j == n - 1) break;
      if ((ra <= rb && i < m - 1) || j == n - 1) {
        ++i;
        ra = a[i];
      } else {
        ++j;
        rb = b[j];
      }
    }
    rebuild_tree();
    compute_potentials();
  }

  void rebuild_tree() {
    std::fill(parent.begin(), parent.end(), -2);
    parent[0] = -1;
    parent_arc[0] = -1;
    depth[0] = 0;
    int head = 0, tail = 0;
    order[tail++] = 0;
    while (head < tail) {
      const int u = order[head++];
      for (int id : adj[u]) {
        const Arc& arc = arcs[id];
        const int v = (u == arc.src) ? sink_node(arc.snk) : arc.src;
        if (parent[v] != -2) continue;
        parent[v] = u;
        parent_arc[v] = id;
        depth[v] = depth[u] + 1;
        order[tail++] = v;
      }
    }
    if (tail != nodes)
      fail(errc::solver_failure, "basis is not a spanning tree");
  }

  void compute_potentials() {
    pot[0] = 0;
    // `order` is a BFS order from the root, so parents come first.
    for (int k = 1; k < nodes; ++k) {
      const int v = order[k];
      const Arc& arc = arcs[parent_arc[v]];
      const double c = cost[size_t(arc.src) * n + arc.snk];
      // Basic-arc condition u_i + v_j = c fixes the child potential.
      pot[v] = c - pot[parent[v]];
    }
  }

  double reduced(int i, int j) const {
    return cost[size_t(i) * n + j] - pot[i] - pot[sink_node(j)];
  }

  // Block pricing with a roving start position.
  size_t scan_pos = 0;
  bool find_entering(int* ei, int* ej) {
    const size_t cells = size_t(m) * n;
    const size_t block =
        std::max<size_t>(256, size_t(std::sqrt(double(cells))) + 1);
    size_t checked = 0;
    double best = -tol;
    bool found = false;
    int i = int(scan_pos / n), j = int(scan_pos % n);
    while (checked < cells) {
      const size_t stop = std::min(cells, checked + block);
      for (; checked < stop; ++checked) {
        const double rc = cost[size_t(i) * n + j] - pot[i] - pot[m + j];
        if (rc < best) {
          best = rc;
          *ei = i;
          *ej = j;
          found = true;
        }
        if (++j == n) {
          j = 0;
          if (++i == m) i = 0;
        }
      }
      if (found) {
        scan_pos = (scan_pos + checked) % cells;
        return true;
      }
    }
    return false;
  }

  std::vector<int> scratch;  // DFS stack for subtree re-hanging

  void pivot(int ei, int ej) {
    // Cycle = entering arc + tree path between its endpoints.
    int u = ei, v = sink_node(ej);
    std::vector<int> path_u, path_v;  // arc ids walking up to the LCA
    while (depth[u] > depth[v]) {
      path_u.push_back(parent_arc[u]);
      u = parent[u];
    }
    while (depth[v] > depth[u]) {
      path_v.push_back(parent_arc[v]);
      v = parent[v];
    }
    while (u != v) {
      path_u.push_back(parent_arc[u]);
      u = parent[u];
      path_v.push_back(parent_arc[v]);
      v = parent[v];
    }

    // Signs alternate around the cycle; the arcs adjacent to both
    // endpoints of the entering (+) arc carry -.
    int leaving = -1;
    bool leaving_on_u = true;
    double theta = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < path_u.size(); k += 2)
      if (arcs[path_u[k]].flow < theta) {
        theta = arcs[path_u[k]].flow;
        leaving = path_u[k];
        leaving_on_u = true;
      }
    for (size_t k = 0; k < path_v.size(); k += 2)
      if (arcs[path_v[k]].flow < theta) {
        theta = arcs[path_v[k]].flow;
        leaving = path_v[k];
        leaving_on_u = false;
      }
    if (leaving < 0) fail(errc::solver_failure, "degenerate cycle");

    for (size_t k = 0; k < path_u.size(); ++k)
      arcs[path_u[k]].flow += (k % 2 == 0) ? -theta : theta;
    for (size_t k = 0; k < path_v.size(); ++k)
      arcs[path_v[k]].flow += (k % 2 == 0) ? -theta : theta;
    arcs[leaving].flow = 0;

    drop_arc(leaving);
    const int entering = add_basic(ei, ej, theta);

    // The leaving arc cut off the subtree that holds the entering
    // endpoint on its side of the cycle; re-hang that subtree through
    // the entering arc and refresh parent/depth/potential only there.
    const int root2 = leaving_on_u ? ei : sink_node(ej);
    const int anchor = leaving_on_u ? sink_node(ej) : ei;
    parent[root2] = anchor;
    parent_arc[root2] = entering;
    depth[root2] = depth[anchor] + 1;
    {
      const Arc& arc = arcs[entering];
      pot[root2] = cost[size_t(arc.src) * n + arc.snk] - pot[anchor];
    }
    scratch.clear();
    scratch.push_back(root2);
    while (!scratch.empty()) {
      const int x = scratch.back();
      scratch.pop_back();
      for (int id : adj[x]) {
        if (id == parent_arc[x]) continue;
        const Arc& arc = arcs[id];
        const int y = (x == arc.src) ? sink_node(arc.snk) : arc.src;
        parent[y] = x;
        parent_arc[y] = id;
        depth[y] = depth[x] + 1;
        pot[y] = cost[size_t(arc.src) * n + arc.snk] - pot[x];
        scratch.push_back(y);
      }
    }
  }

  void drop_arc(int id) {
    arcs[id].active = false;
    auto remove_from = [&](int node) {
      auto& list = adj[node];
      list.erase(std::find(list.begin(), list.end(), id));
    };
    remove_from(arcs[id].src);
    remove_from(sink_node(arcs[id].snk));
  }

  TransportSolution solve() {
    init_basis();
    const size_t max_pivots = 4'000'000;
    size_t pivots = 0;
    int ei, ej;
    while (find_entering(&ei, &ej)) {
      if (++pivots > max_pivots)
        fail(errc::solver_failure, "pivot limit exceeded");
      pivot(ei, ej);
    }

    // Certify: dual feasibility over all cells, primal feasibility of the
    // basic flows.
    double worst = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) worst = std::min(worst, reduced(i, j));
    if (worst < -64 * tol)
      fail(errc::solver_failure, "dual feasibility not certified");

    TransportSolution sol;
    sol.dual_gap = -worst;
    for (const Arc& arc : arcs)
      if (arc.active && arc.flow > 0) {
        sol.flows.push_back(TransportTriplet{arc.src, arc.snk, arc.flow});
        sol.cost += arc.flow * cost[size_t(arc.src) * n + arc.snk];
      }
    return sol;
  }
};

}  // namespace

TransportSolution solve_transportation(const std::vector<double>& supply,
                                       const std::vector<double>& demand,
                                       const std::vector<double>& cost) {
  const int m = int(supply.size()), n = int(demand.size());
  if (m == 0 || n == 0)
    fail(errc::solver_failure, "empty transportation instance");
  if (cost.size() != size_t(m) * n)
    fail(errc::solver_failure, "cost matrix shape mismatch");
  double sa = 0, sb = 0;
  for (double v : supply) {
    if (!(v > 0)) fail(errc::solver_failure, "supplies must be positive");
    sa += v;
  }
  for (double v : demand) {
    if (!(v > 0)) fail(errc::solver_failure, "demands must be positive");
    sb += v;
  }
  std::vector<double> b = demand;
  const double scale = sa / sb;  // absorb float drift between the marginals
  for (double& v : b) v *= scale;

  Simplex s(supply, b, cost);
  return s.solve();
}

}  // namespace wsr::detail
