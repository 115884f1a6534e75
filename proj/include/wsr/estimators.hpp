#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wsr/metric_space.hpp"

namespace wsr {

/// Name of the pseudo-random scheme; recorded in artifact outputs.
inline constexpr const char* kGeneratorId = "splitmix64/mt19937_64/invcdf-v1";

/// Derives an independent substream seed for one trial.
uint64_t substream_seed(uint64_t seed, uint64_t trial_index);

/// Deterministic uniform draws in [0,1) with 53 bits of precision.
class Rng {
 public:
  explicit Rng(uint64_t seed);
  double uniform01();
  uint64_t next_u64();

 private:
  std::mt19937_64 gen_;
};

struct SampleBatch {
  SpacePtr space;
  std::vector<int> indices;
  uint64_t seed = 0;
  std::string generator_id = kGeneratorId;
};

/// n IID draws from P via inverse-CDF; identical (seed, P, n) reproduce
/// identical batches.
SampleBatch sample(const DiscreteMeasure& p, int n, uint64_t seed);

/// The empirical distribution of a nonempty batch.
DiscreteMeasure empirical(const SampleBatch& batch);

/// Routes each point's Q-mass to its nearest center in D (ties to the
/// lowest-index center). The result minimizes W_r(Q, .) over measures
/// supported on D and satisfies the doubling bound
/// W_r(P, Q') <= 2 W_r(P, Q) for any P supported on D.
DiscreteMeasure voronoi_project(const DiscreteMeasure& q,
                                const PointSet& centers);

/// The Voronoi cell labeling used by voronoi_project: nearest center
/// index (position in `centers`) per point.
std::vector<int> voronoi_cells(const FiniteMetricSpace& space,
                               const PointSet& centers);

}  // namespace wsr
