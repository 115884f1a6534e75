// Acceptance suite: one pass/fail line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

#include "wsr/bounds.hpp"
#include "wsr/estimators.hpp"
#include "wsr/harness.hpp"
#include "wsr/partition.hpp"
#include "wsr/transport.hpp"

using namespace wsr;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// Worst transport-plan diagnostics across the randomized criteria.
struct PlanAudit {
  double max_residual = 0;
  double max_cost_dev = 0;
  long long plans = 0;

  void add(const TransportPlan& plan, double reported_cost_r) {
    ++plans;
    max_residual = std::max(max_residual, plan.max_marginal_residual());
    max_cost_dev = std::max(
        max_cost_dev, std::abs(plan.recompute_cost() - reported_cost_r));
  }
};

PlanAudit g_audit;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

void run_reproduction(int criterion, const std::string& which,
                      const std::map<std::string, std::string>& overrides,
                      double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ReproduceReport rep = reproduce_example(which, overrides);
    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << which;
    for (const auto& [k, v] : overrides) detail << " " << k << "=" << v;
    detail << ": slope " << fmt(rep.fit.slope) << ", "
           << (rep.pass ? "all checks ok" : "checks failed") << ", "
           << fmt(elapsed) << " s";
    for (const std::string& line : rep.checks)
      if (line.rfind("FAIL", 0) == 0) detail << " [" << line << "]";
    report(criterion, rep.pass && elapsed <= budget_s, detail.str());
  } catch (const std::exception& e) {
    report(criterion, false, which + std::string(": ") + e.what());
  }
}

void criterion4_line_oracle() {
  std::mt19937_64 rng(0xacce9741);
  double worst = 0;
  int done = 0;
  for (int it = 0; it < 1000; ++it) {
    const int m = 2 + int(rng() % 49);
    const SpacePtr space = wsr::testing::random_line_space(rng, m);
    const DiscreteMeasure p = wsr::testing::random_measure(rng, space);
    const DiscreteMeasure q = wsr::testing::random_measure(rng, space);
    const double r = (it % 2 == 0) ? 1.0 : 2.0;
    const WassersteinResult res = wasserstein_exact(p, q, r);
    g_audit.add(res.plan, std::pow(res.value, r));
    worst = std::max(worst, std::abs(res.value - wasserstein_1d(p, q, r)));
    ++done;
  }
  report(4, worst <= 1e-8,
         std::to_string(done) + " line instances, max |exact - 1d| = " +
             fmt(worst));
}

void criterion5_sandwich() {
  std::mt19937_64 rng(0xacce9742);
  double worst = 0;
  for (int it = 0; it < 1000; ++it) {
    const int m = 2 + int(rng() % 14);
    const SpacePtr space =
        wsr::testing::random_euclidean_space(rng, m, 1 + int(rng() % 3));
    const DiscreteMeasure p = wsr::testing::random_measure(rng, space);
    const DiscreteMeasure q = wsr::testing::random_measure(rng, space);
    const double r = (it % 2 == 0) ? 1.0 : 2.0;
    const WassersteinResult res = wasserstein_exact(p, q, r);
    g_audit.add(res.plan, std::pow(res.value, r));
    const SandwichBounds b = sandwich_bounds(p, q, r);
    const double wrr = std::pow(res.value, r);
    worst = std::max(worst, b.lo - wrr);
    worst = std::max(worst, wrr - b.hi);
  }
  report(5, worst <= 1e-9,
         "1000 instances, max sandwich violation = " + fmt(worst));
}

void criterion6_multires() {
  std::mt19937_64 rng(0xacce9743);
  double worst = 0;
  for (int it = 0; it < 500; ++it) {
    const int m = 5 + int(rng() % 16);
    const SpacePtr space = wsr::testing::random_euclidean_space(rng, m, 2);
    const DiscreteMeasure p = wsr::testing::random_measure(rng, space);
    const DiscreteMeasure q = wsr::testing::random_measure(rng, space);
    std::uniform_real_distribution<double> unif(0.3, 0.9);
    std::vector<double> eps{unif(rng)};
    while (eps.size() < 3) eps.push_back(eps.back() / 2);
    const NestedBuildResult nb = build_nested_sequence(space, eps);
    const double r = (it % 2 == 0) ? 1.0 : 2.0;
    const WassersteinResult res = wasserstein_exact(p, q, r);
    g_audit.add(res.plan, std::pow(res.value, r));
    const double bound = multires_upper_bound(p, q, nb.sequence, r).value;
    worst = std::max(worst, std::pow(res.value, r) - bound);
  }
  report(6, worst <= 1e-9,
         "500 nested instances, max excess of W_r^r over bound = " +
             fmt(worst));
}

void criterion7_refine_coarsen() {
  std::mt19937_64 rng(0xacce9744);
  int violations = 0;
  for (int it = 0; it < 500; ++it) {
    const int m = 4 + int(rng() % 14);
    const SpacePtr space = wsr::testing::random_euclidean_space(rng, m, 2);
    auto random_partition = [&](int parts) {
      std::vector<PointSet> cells(parts);
      for (int p = 0; p < m; ++p) cells[int(rng() % parts)].push_back(p);
      std::vector<PointSet> nonempty;
      for (auto& c : cells)
        if (!c.empty()) nonempty.push_back(std::move(c));
      return Partition(space, std::move(nonempty));
    };
    const Partition s = random_partition(1 + int(rng() % 5));
    const Partition t = random_partition(1 + int(rng() % 6));
    const Partition sp = refine_coarsen(s, t);
    if (sp.cell_count() > s.cell_count()) ++violations;
    if (sp.resolution() > s.resolution() + 2 * t.resolution() + 1e-12)
      ++violations;
    if (!sp.is_refined_by(t)) ++violations;
  }
  report(7, violations == 0,
         "500 partition pairs, " + std::to_string(violations) +
             " contract violations");
}

void criterion8_doubling() {
  std::mt19937_64 rng(0xacce9745);
  double worst = 0;
  for (int it = 0; it < 500; ++it) {
    const int m = 4 + int(rng() % 10);
    const SpacePtr space = wsr::testing::random_euclidean_space(rng, m, 2);
    PointSet centers;
    for (int i = 0; i < m; ++i)
      if (rng() % 2 == 0) centers.push_back(i);
    if (centers.empty()) centers.push_back(int(rng() % m));
    std::vector<double> pw(m, 0.0);
    double total = 0;
    for (int c : centers) {
      pw[c] = double(rng() % 1000 + 1);
      total += pw[c];
    }
    for (double& v : pw) v /= total;
    const DiscreteMeasure p(space, std::move(pw));
    const DiscreteMeasure q = wsr::testing::random_measure(rng, space);
    const DiscreteMeasure qp = voronoi_project(q, centers);
    const double r = (it % 2 == 0) ? 1.0 : 2.0;
    const WassersteinResult direct = wasserstein_exact(p, q, r);
    const WassersteinResult projected = wasserstein_exact(p, qp, r);
    g_audit.add(direct.plan, std::pow(direct.value, r));
    g_audit.add(projected.plan, std::pow(projected.value, r));
    worst = std::max(worst, projected.value - 2 * direct.value);
  }
  report(8, worst <= 1e-9,
         "500 projection instances, max W_r(P,Q') - 2 W_r(P,Q) = " +
             fmt(worst));
}

void criterion9_counting_inequalities() {
  std::mt19937_64 rng(0xacce9746);
  int spaces = 0, violations = 0;
  while (spaces < 50) {
    const int m = 4 + int(rng() % 7);  // <= 10 points
    const SpacePtr space = wsr::testing::random_euclidean_space(rng, m, 2);
    std::vector<double> dists;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) dists.push_back(space->dist(i, j));
    auto on_tie = [&](double eps) {
      for (double d : dists)
        if (std::abs(d - eps) < 1e-9 || std::abs(d - eps / 2) < 1e-9)
          return true;
      return false;
    };
    std::uniform_real_distribution<double> unif(0.02, 1.4);
    std::vector<double> grid;
    for (int tries = 0; tries < 200 && int(grid.size()) < 8; ++tries) {
      const double eps = unif(rng);
      if (!on_tie(eps)) grid.push_back(eps);
    }
    if (int(grid.size()) < 8) continue;
    ++spaces;
    for (double eps : grid) {
      const long long pack =
          packing_number(*space, eps, SearchMode::exact).lower;
      const long long cov =
          covering_number(*space, eps, SearchMode::exact).lower;
      const long long pack_half =
          packing_number(*space, eps / 2, SearchMode::exact).lower;
      if (!(pack <= cov && cov <= pack_half)) ++violations;
      const PackingRadius rad =
          packing_radius(*space, int(pack), SearchMode::exact);
      if (!rad.degenerate && rad.value < eps) ++violations;
    }
    for (int k = 2; k <= m; ++k) {
      const double rk = packing_radius(*space, k, SearchMode::exact).value;
      if (packing_number(*space, rk, SearchMode::exact).lower < k)
        ++violations;
    }
  }
  report(9, violations == 0,
         "50 spaces x 8 scales, " + std::to_string(violations) +
             " counting-inequality violations");
}

void criterion10_multinomial_envelope() {
  const auto t0 = std::chrono::steady_clock::now();
  int violations = 0;
  std::ostringstream detail;
  try {
    for (int k : {2, 8, 32}) {
      const std::vector<MultinomialRow> rows =
          multinomial_risk_experiment(k, {64, 1024}, 2000, 0xacce9747);
      for (const MultinomialRow& row : rows) {
        const double measured =
            std::max(row.mean_uniform + 2 * row.se_uniform,
                     row.mean_worst + 2 * row.se_worst);
        if (row.lower > measured) ++violations;
        if (row.mean_uniform - 2 * row.se_uniform > row.upper) ++violations;
        if (row.mean_worst - 2 * row.se_worst > row.upper) ++violations;
      }
    }
  } catch (const std::exception& e) {
    report(10, false, e.what());
    return;
  }
  const double elapsed = seconds_since(t0);
  detail << "k in {2,8,32}, n in {64,1024}, 2000 trials: " << violations
         << " envelope violations, " << fmt(elapsed) << " s";
  report(10, violations == 0 && elapsed <= 120.0, detail.str());
}

void criterion11_fano() {
  bool pass = true;
  std::ostringstream detail;
  try {
    for (int k : {8, 16, 32}) {
      const long long n = 32LL * k;
      const HardInstanceFamily fam = hard_instance_family(k, n);
      const int h = fam.code_length;
      if (std::log(double(fam.members.size())) <
          h * std::log(2.0) / 8.0 - 1e-9)
        pass = false;
      if (fam.min_pairwise_hamming < (h + 7) / 8) pass = false;
      for (const auto& p : fam.members) {
        double sum = 0;
        for (double w : p) {
          if (w < 0) pass = false;
          sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12) pass = false;
      }
      double l1_min = 2.0;
      for (size_t a = 0; a < fam.members.size(); ++a)
        for (size_t b = a + 1; b < fam.members.size(); ++b) {
          double l1 = 0;
          for (int j = 0; j < k; ++j)
            l1 += std::abs(fam.members[a][j] - fam.members[b][j]);
          l1_min = std::min(l1_min, l1);
        }
      if (std::abs(l1_min - fam.min_pairwise_l1) > 1e-12) pass = false;

      double mean_kl = 0;
      for (const auto& p : fam.members)
        mean_kl += kl_categorical(p, fam.base);
      mean_kl /= double(fam.members.size());
      const double lhs = double(n) * mean_kl;
      const double rhs = std::log(double(fam.members.size())) / 16.0;
      detail << "k=" << k << " n.KL=" << fmt(lhs) << " cap=" << fmt(rhs)
             << "; ";
      if (lhs > rhs) pass = false;
    }
  } catch (const std::exception& e) {
    report(11, false, e.what());
    return;
  }
  report(11, pass, detail.str() + (pass ? "all family invariants hold"
                                        : "invariant violated"));
}

void criterion12_bound_consistency() {
  int violations = 0;
  for (int m : {2, 4, 16})
    for (double r : {1.0, 2.0})
      for (long long n = 16; n <= 4096; n *= 2) {
        std::map<int, double> radii;
        for (int k = 2; k <= m; ++k) radii[k] = 1.0;
        const double lower = theorem3_lower_bound(radii, n, r).value;
        const double upper = theorem1_finite_limit(m, 1.0, n, r);
        if (lower > upper) ++violations;
      }
  report(12, violations == 0,
         "m in {2,4,16}, r in {1,2}, dyadic n: " + std::to_string(violations) +
             " lower > upper violations");
}

void criterion13_plan_audit() {
  std::ostringstream detail;
  detail << g_audit.plans << " optimal plans audited, max marginal residual "
         << fmt(g_audit.max_residual) << ", max cost deviation "
         << fmt(g_audit.max_cost_dev);
  report(13,
         g_audit.max_residual <= 1e-9 && g_audit.max_cost_dev <= 1e-10 &&
             g_audit.plans > 0,
         detail.str());
}

}  // namespace

int main() {
  run_reproduction(1, "finite", {}, 120.0);
  run_reproduction(2, "cube", {}, 60.0);
  run_reproduction(3, "cube", {{"dims", "3"}}, 600.0);
  criterion4_line_oracle();
  criterion5_sandwich();
  criterion6_multires();
  criterion7_refine_coarsen();
  criterion8_doubling();
  criterion9_counting_inequalities();
  criterion10_multinomial_envelope();
  criterion11_fano();
  criterion12_bound_consistency();
  criterion13_plan_audit();
  std::printf("%d of 13 criteria failed\n", g_failures);
  return g_failures;
}
