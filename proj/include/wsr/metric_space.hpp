#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wsr/error.hpp"

namespace wsr {

// Point indices are 0-based into the space's ground set.
using PointSet = std::vector<int>;

/// A finite metric space: a validated symmetric distance table over an
/// indexed ground set. Immutable after construction.
class FiniteMetricSpace {
 public:
  /// Validates symmetry, zero diagonal, and (for sizes up to
  /// `kTriangleCheckLimit`) the triangle inequality. Larger tables skip
  /// the O(m^3) check and record that in the label.
  static FiniteMetricSpace from_table(std::vector<std::vector<double>> table,
                                      std::string label = "");

  int size() const noexcept { return size_; }
  const std::string& label() const noexcept { return label_; }
  bool triangle_checked() const noexcept { return triangle_checked_; }

  double dist(int i, int j) const { return dist_[size_t(i) * size_ + j]; }

  /// Max pairwise distance over a nonempty subset; 0 for singletons.
  double diameter(const PointSet& subset) const;
  double diameter() const;  // whole space

  /// Min pairwise distance over a subset with at least 2 points.
  double separation(const PointSet& subset) const;

  /// 1-D coordinates consistent with the metric (|x_i - x_j| = dist(i,j)),
  /// when the space is line-embeddable. Throws not_line_embeddable.
  std::vector<double> line_embedding() const;

  /// All points, 0..size-1.
  PointSet all_points() const;

  static constexpr int kTriangleCheckLimit = 512;

 private:
  FiniteMetricSpace() = default;

  int size_ = 0;
  std::vector<double> dist_;  // row-major size*size
  std::string label_;
  bool triangle_checked_ = false;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

// Built-in generators (also reachable via the CLI's --space spec strings).

/// m points with dist(i,j) = delta for i != j.
SpacePtr make_discrete_space(int m, double delta);
/// {0..side-1}^D with the l_inf metric.
SpacePtr make_grid_space(int dims, int side);
/// Uniform k^D lattice on [0,1]^D with the Euclidean metric.
SpacePtr make_cube_grid_space(int dims, int k);
/// {0..m-1} with |i - j|.
SpacePtr make_path_space(int m);

/// Parses generator specs like "discrete(16,1)", "grid(3,8)",
/// "cube-grid(3,16)", "path(5)". Anything else is treated as a
/// distance-matrix file path.
SpacePtr make_space_from_spec(const std::string& spec);

/// Distance-matrix file: first line m, then m rows of m reals.
SpacePtr load_space(const std::string& path);
void save_space(const FiniteMetricSpace& space, const std::string& path);

/// Nonnegative weights over a space's points, summing to one.
/// Construction renormalizes deviations below 1e-9 and rejects larger ones.
class DiscreteMeasure {
 public:
  DiscreteMeasure(SpacePtr space, std::vector<double> weights);

  static DiscreteMeasure uniform(SpacePtr space);
  static DiscreteMeasure point_mass(SpacePtr space, int point);

  const SpacePtr& space() const noexcept { return space_; }
  int size() const noexcept { return int(weights_.size()); }
  double weight(int i) const { return weights_[i]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Points with strictly positive weight.
  PointSet support() const;

  double mass_on(const PointSet& subset) const;

  static constexpr double kNormalizationTol = 1e-9;

 private:
  SpacePtr space_;
  std::vector<double> weights_;
};

/// Measure file: lines of `index weight`; unlisted indices get weight 0.
DiscreteMeasure load_measure(SpacePtr space, const std::string& path);
void save_measure(const DiscreteMeasure& m, const std::string& path);

struct MomentEstimate {
  double order = 0;    // l in (0, inf]; infinity() means max over support
  int base_point = 0;  // x
  double value = 0;    // m_{l,x}(P)
};

/// l-th metric moment of P around base_point:
/// (sum_y P(y) dist(x,y)^l)^{1/l}; max over support for l = inf.
MomentEstimate metric_moment(const DiscreteMeasure& p, double order,
                             int base_point);

inline void require_same_space(const DiscreteMeasure& a,
                               const DiscreteMeasure& b) {
  if (a.space().get() != b.space().get())
    fail(errc::space_mismatch, "measures live on different spaces");
}

}  // namespace wsr
