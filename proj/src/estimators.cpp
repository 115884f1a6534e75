#include "wsr/estimators.hpp"

#include <algorithm>
#include <limits>

namespace wsr {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t substream_seed(uint64_t seed, uint64_t trial_index) {
  return splitmix64(seed ^ trial_index);
}

Rng::Rng(uint64_t seed) : gen_(seed) {}

uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform01() {
  return double(gen_() >> 11) * 0x1.0p-53;
}

SampleBatch sample(const DiscreteMeasure& p, int n, uint64_t seed) {
  if (n < 0) fail(errc::invalid_argument, "negative sample size");

  // Inverse CDF over point indices in natural order.
  const std::vector<double>& w = p.weights();
  std::vector<double> cdf(w.size());
  double acc = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  Rng rng(seed);
  SampleBatch batch;
  batch.space = p.space();
  batch.seed = seed;
  batch.indices.reserve(n);
  for (int t = 0; t < n; ++t) {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    batch.indices.push_back(int(it - cdf.begin()));
  }
  return batch;
}

DiscreteMeasure empirical(const SampleBatch& batch) {
  if (batch.indices.empty())
    fail(errc::invalid_argument, "empty sample batch");
  std::vector<double> w(batch.space->size(), 0.0);
  const double unit = 1.0 / double(batch.indices.size());
  for (int i : batch.indices) w[i] += unit;
  return DiscreteMeasure(batch.space, std::move(w));
}

std::vector<int> voronoi_cells(const FiniteMetricSpace& space,
                               const PointSet& centers) {
  if (centers.empty()) fail(errc::empty_center_set, "no centers given");
  for (int c : centers)
    if (c < 0 || c >= space.size())
      fail(errc::invalid_argument, "center index out of range");
  std::vector<int> cell(space.size(), 0);
  for (int x = 0; x < space.size(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < centers.size(); ++k) {
      const double d = space.dist(x, centers[k]);
      if (d < best) {  // ties keep the lowest-index center
        best = d;
        cell[x] = int(k);
      }
    }
  }
  return cell;
}

DiscreteMeasure voronoi_project(const DiscreteMeasure& q,
                                const PointSet& centers) {
  const auto& space = *q.space();
  const std::vector<int> cell = voronoi_cells(space, centers);
  std::vector<double> w(space.size(), 0.0);
  for (int x = 0; x < space.size(); ++x)
    w[centers[cell[x]]] += q.weight(x);
  return DiscreteMeasure(q.space(), std::move(w));
}

}  // namespace wsr
