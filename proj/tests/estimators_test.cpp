#include <map>
#include <random>

#include "doctest.h"
#include "test_util.hpp"

#include "wsr/estimators.hpp"
#include "wsr/transport.hpp"

using namespace wsr;
using wsr::testing::throws_code;

TEST_CASE("sampling determinism and marginals") {
  const SpacePtr p = make_path_space(5);
  const DiscreteMeasure mu(p, {0.1, 0.2, 0.3, 0.2, 0.2});

  const SampleBatch a = sample(mu, 200, 42);
  const SampleBatch b = sample(mu, 200, 42);
  CHECK(a.indices == b.indices);
  CHECK(a.generator_id == kGeneratorId);
  CHECK(a.seed == 42);

  const SampleBatch c = sample(mu, 200, 43);
  CHECK(a.indices != c.indices);

  CHECK(substream_seed(42, 0) != substream_seed(42, 1));
  CHECK(substream_seed(42, 7) == substream_seed(42, 7));

  // Never draws outside the support; frequencies roughly match.
  std::map<int, int> counts;
  const SampleBatch big = sample(mu, 20000, 7);
  for (int i : big.indices) {
    REQUIRE(i >= 0);
    REQUIRE(i < 5);
    ++counts[i];
  }
  for (int i = 0; i < 5; ++i)
    CHECK(counts[i] / 20000.0 == doctest::Approx(mu.weight(i)).epsilon(0.1));

  // Zero-weight points are never drawn.
  const DiscreteMeasure sparse(p, {0.5, 0.0, 0.5, 0.0, 0.0});
  for (int i : sample(sparse, 1000, 9).indices)
    CHECK((i == 0 || i == 2));

  CHECK(throws_code(errc::invalid_argument, [&] { sample(mu, -1, 0); }));
}

TEST_CASE("empirical measure") {
  const SpacePtr p = make_path_space(4);
  SampleBatch batch;
  batch.space = p;
  batch.indices = {0, 0, 3, 1};
  const DiscreteMeasure e = empirical(batch);
  CHECK(e.weight(0) == doctest::Approx(0.5));
  CHECK(e.weight(1) == doctest::Approx(0.25));
  CHECK(e.weight(2) == 0.0);
  CHECK(e.weight(3) == doctest::Approx(0.25));

  batch.indices.clear();
  CHECK(throws_code(errc::invalid_argument, [&] { empirical(batch); }));
}

TEST_CASE("voronoi labeling and projection") {
  const SpacePtr p = make_path_space(3);
  const DiscreteMeasure u = DiscreteMeasure::uniform(p);

  // Centers {0, 2}: the midpoint 1 ties and goes to the first center.
  const std::vector<int> cells = voronoi_cells(*p, {0, 2});
  CHECK(cells == std::vector<int>{0, 0, 1});
  const DiscreteMeasure proj = voronoi_project(u, {0, 2});
  CHECK(proj.weight(0) == doctest::Approx(2.0 / 3.0));
  CHECK(proj.weight(2) == doctest::Approx(1.0 / 3.0));
  CHECK(proj.weight(1) == 0.0);

  // Projecting onto the full space is the identity.
  const DiscreteMeasure fix = voronoi_project(u, p->all_points());
  for (int i = 0; i < 3; ++i) CHECK(fix.weight(i) == doctest::Approx(u.weight(i)));

  CHECK(throws_code(errc::empty_center_set, [&] { voronoi_project(u, {}); }));
  CHECK(throws_code(errc::invalid_argument, [&] { voronoi_project(u, {5}); }));
}

TEST_CASE("projection optimality among center-supported measures") {
  // Enumerate a simplex grid over the centers; no candidate beats the
  // projection for W_r(Q, .).
  std::mt19937_64 rng(31);
  for (int it = 0; it < 20; ++it) {
    const SpacePtr space = wsr::testing::random_euclidean_space(rng, 7, 2);
    const DiscreteMeasure q = wsr::testing::random_measure(rng, space);
    const PointSet centers{0, 3, 6};
    const DiscreteMeasure proj = voronoi_project(q, centers);
    for (double r : {1.0, 2.0}) {
      const double best = wasserstein_exact(q, proj, r).value;
      const int steps = 8;
      for (int a = 0; a <= steps; ++a)
        for (int b = 0; a + b <= steps; ++b) {
          std::vector<double> w(space->size(), 0.0);
          w[centers[0]] = double(a) / steps;
          w[centers[1]] = double(b) / steps;
          w[centers[2]] = double(steps - a - b) / steps;
          const DiscreteMeasure cand(space, std::move(w));
          CHECK(best <= wasserstein_exact(q, cand, r).value + 1e-9);
        }
    }
  }
}

TEST_CASE("projection doubling bound") {
  // W_r(P, Q') <= 2 W_r(P, Q) whenever P lives on the center set.
  std::mt19937_64 rng(88);
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
    for (double r : {1.0, 2.0})
      CHECK(wasserstein_exact(p, qp, r).value <=
            2.0 * wasserstein_exact(p, q, r).value + 1e-9);
  }
}
