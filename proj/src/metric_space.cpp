#include "wsr/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace wsr {

namespace {

constexpr double kTriangleTol = 1e-12;

std::string fmt_triple(int i, int j, int k) {
  std::ostringstream os;
  os << "(" << i << "," << j << "," << k << ")";
  return os.str();
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::from_table(
    std::vector<std::vector<double>> table, std::string label) {
  const int m = int(table.size());
  if (m < 1) fail(errc::invalid_argument, "distance table must be nonempty");
  for (const auto& row : table)
    if (int(row.size()) != m)
      fail(errc::invalid_argument, "distance table must be square");

  FiniteMetricSpace space;
  space.size_ = m;
  space.dist_.resize(size_t(m) * m);
  for (int i = 0; i < m; ++i) {
    if (table[i][i] != 0.0)
      fail(errc::nonzero_diagonal,
           "dist(" + std::to_string(i) + "," + std::to_string(i) + ") != 0");
    for (int j = 0; j < m; ++j) {
      if (table[i][j] < 0.0)
        fail(errc::invalid_argument, "negative distance entry");
      if (table[i][j] != table[j][i])
        fail(errc::asymmetric_distance,
             "dist(" + std::to_string(i) + "," + std::to_string(j) +
                 ") != dist(" + std::to_string(j) + "," + std::to_string(i) +
                 ")");
      space.dist_[size_t(i) * m + j] = table[i][j];
    }
  }

  if (m <= kTriangleCheckLimit) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const double dij = space.dist(i, j);
        for (int k = 0; k < m; ++k)
          if (dij > space.dist(i, k) + space.dist(k, j) + kTriangleTol)
            fail(errc::triangle_violation,
                 "triangle violation at " + fmt_triple(i, j, k));
      }
    space.triangle_checked_ = true;
  } else {
    label += (label.empty() ? "" : " ") + std::string("[triangle-unchecked]");
  }
  space.label_ = std::move(label);
  return space;
}

double FiniteMetricSpace::diameter(const PointSet& subset) const {
  if (subset.empty()) fail(errc::empty_subset, "diameter of empty subset");
  double d = 0;
  for (size_t a = 0; a < subset.size(); ++a)
    for (size_t b = a + 1; b < subset.size(); ++b)
      d = std::max(d, dist(subset[a], subset[b]));
  return d;
}

double FiniteMetricSpace::diameter() const { return diameter(all_points()); }

double FiniteMetricSpace::separation(const PointSet& subset) const {
  if (subset.size() < 2)
    fail(errc::degenerate_subset, "separation needs at least 2 points");
  double d = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < subset.size(); ++a)
    for (size_t b = a + 1; b < subset.size(); ++b)
      d = std::min(d, dist(subset[a], subset[b]));
  return d;
}

std::vector<double> FiniteMetricSpace::line_embedding() const {
  // Anchor at one endpoint of a diametral pair; then x_i = dist(anchor, i)
  // works whenever any embedding exists.
  int anchor = 0;
  double best = -1;
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j)
      if (dist(i, j) > best) {
        best = dist(i, j);
        anchor = i;
      }
  std::vector<double> x(size_);
  for (int i = 0; i < size_; ++i) x[i] = dist(anchor, i);
  for (int i = 0; i < size_; ++i)
    for (int j = i + 1; j < size_; ++j)
      if (std::abs(std::abs(x[i] - x[j]) - dist(i, j)) > 1e-9)
        fail(errc::not_line_embeddable,
             "space is not isometric to a subset of the line");
  return x;
}

PointSet FiniteMetricSpace::all_points() const {
  PointSet p(size_);
  for (int i = 0; i < size_; ++i) p[i] = i;
  return p;
}

SpacePtr make_discrete_space(int m, double delta) {
  if (m < 1 || delta <= 0)
    fail(errc::invalid_argument, "discrete(m, delta) needs m >= 1, delta > 0");
  std::vector<std::vector<double>> t(m, std::vector<double>(m, delta));
  for (int i = 0; i < m; ++i) t[i][i] = 0;
  return std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::from_table(
      std::move(t), "discrete(" + std::to_string(m) + ")"));
}

namespace {

// Enumerates {0..side-1}^dims in row-major order.
std::vector<std::vector<int>> lattice_points(int dims, int side) {
  std::vector<std::vector<int>> pts;
  std::vector<int> cur(dims, 0);
  while (true) {
    pts.push_back(cur);
    int d = dims - 1;
    while (d >= 0 && ++cur[d] == side) cur[d--] = 0;
    if (d < 0) break;
  }
  return pts;
}

SpacePtr lattice_space(int dims, int side, bool euclidean, double scale,
                       const std::string& label) {
  if (dims < 1 || side < 1)
    fail(errc::invalid_argument, "lattice generator needs dims,side >= 1");
  auto pts = lattice_points(dims, side);
  const int m = int(pts.size());
  std::vector<std::vector<double>> t(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double d = 0;
      if (euclidean) {
        for (int a = 0; a < dims; ++a) {
          double v = double(pts[i][a] - pts[j][a]) * scale;
          d += v * v;
        }
        d = std::sqrt(d);
      } else {
        for (int a = 0; a < dims; ++a)
          d = std::max(d, std::abs(double(pts[i][a] - pts[j][a])) * scale);
      }
      t[i][j] = t[j][i] = d;
    }
  return std::make_shared<FiniteMetricSpace>(
      FiniteMetricSpace::from_table(std::move(t), label));
}

}  // namespace

SpacePtr make_grid_space(int dims, int side) {
  return lattice_space(dims, side, /*euclidean=*/false, 1.0,
                       "grid(" + std::to_string(dims) + "," +
                           std::to_string(side) + ")");
}

SpacePtr make_cube_grid_space(int dims, int k) {
  if (k < 2) fail(errc::invalid_argument, "cube-grid needs k >= 2");
  return lattice_space(dims, k, /*euclidean=*/true, 1.0 / (k - 1),
                       "cube-grid(" + std::to_string(dims) + "," +
                           std::to_string(k) + ")");
}

SpacePtr make_path_space(int m) {
  if (m < 1) fail(errc::invalid_argument, "path(m) needs m >= 1");
  std::vector<std::vector<double>> t(m, std::vector<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) t[i][j] = std::abs(i - j);
  return std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::from_table(
      std::move(t), "path(" + std::to_string(m) + ")"));
}

namespace {

bool parse_gen(const std::string& spec, const std::string& name,
               std::vector<double>* args) {
  if (spec.rfind(name + "(", 0) != 0 || spec.back() != ')') return false;
  std::string inner = spec.substr(name.size() + 1,
                                  spec.size() - name.size() - 2);
  args->clear();
  std::istringstream is(inner);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      args->push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(errc::parse_error, "bad generator argument in '" + spec + "'");
    }
  }
  return true;
}

}  // namespace

SpacePtr make_space_from_spec(const std::string& spec) {
  std::vector<double> a;
  if (parse_gen(spec, "discrete", &a)) {
    if (a.size() != 2) fail(errc::parse_error, "discrete(m, delta)");
    return make_discrete_space(int(a[0]), a[1]);
  }
  if (parse_gen(spec, "grid", &a)) {
    if (a.size() != 2) fail(errc::parse_error, "grid(D, side)");
    return make_grid_space(int(a[0]), int(a[1]));
  }
  if (parse_gen(spec, "cube-grid", &a)) {
    if (a.size() != 2) fail(errc::parse_error, "cube-grid(D, k)");
    return make_cube_grid_space(int(a[0]), int(a[1]));
  }
  if (parse_gen(spec, "path", &a)) {
    if (a.size() != 1) fail(errc::parse_error, "path(m)");
    return make_path_space(int(a[0]));
  }
  return load_space(spec);
}

SpacePtr load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open space file: " + path);
  int m = 0;
  if (!(in >> m) || m < 1)
    fail(errc::parse_error, "bad point count in " + path);
  std::vector<std::vector<double>> t(m, std::vector<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (!(in >> t[i][j]))
        fail(errc::parse_error, "truncated distance table in " + path);
  return std::make_shared<FiniteMetricSpace>(
      FiniteMetricSpace::from_table(std::move(t), path));
}

void save_space(const FiniteMetricSpace& space, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write space file: " + path);
  out.precision(17);
  out << space.size() << "\n";
  for (int i = 0; i < space.size(); ++i) {
    for (int j = 0; j < space.size(); ++j)
      out << (j ? " " : "") << space.dist(i, j);
    out << "\n";
  }
}

DiscreteMeasure::DiscreteMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) fail(errc::invalid_argument, "null space");
  if (int(weights_.size()) != space_->size())
    fail(errc::invalid_argument, "weight count != space size");
  double sum = 0;
  for (double w : weights_) {
    if (w < 0) fail(errc::invalid_argument, "negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kNormalizationTol)
    fail(errc::invalid_argument,
         "weights sum to " + std::to_string(sum) + ", expected 1");
  if (sum != 1.0)
    for (double& w : weights_) w /= sum;
}

DiscreteMeasure DiscreteMeasure::uniform(SpacePtr space) {
  if (!space) fail(errc::invalid_argument, "null space");
  std::vector<double> w(space->size(), 1.0 / space->size());
  return DiscreteMeasure(std::move(space), std::move(w));
}

DiscreteMeasure DiscreteMeasure::point_mass(SpacePtr space, int point) {
  if (!space) fail(errc::invalid_argument, "null space");
  if (point < 0 || point >= space->size())
    fail(errc::invalid_argument, "point index out of range");
  std::vector<double> w(space->size(), 0.0);
  w[point] = 1.0;
  return DiscreteMeasure(std::move(space), std::move(w));
}

PointSet DiscreteMeasure::support() const {
  PointSet s;
  for (int i = 0; i < size(); ++i)
    if (weights_[i] > 0) s.push_back(i);
  return s;
}

double DiscreteMeasure::mass_on(const PointSet& subset) const {
  double m = 0;
  for (int i : subset) m += weights_[i];
  return m;
}

DiscreteMeasure load_measure(SpacePtr space, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open measure file: " + path);
  std::vector<double> w(space->size(), 0.0);
  int idx;
  double val;
  while (in >> idx >> val) {
    if (idx < 0 || idx >= space->size())
      fail(errc::parse_error, "measure index out of range in " + path);
    w[idx] = val;
  }
  return DiscreteMeasure(std::move(space), std::move(w));
}

void save_measure(const DiscreteMeasure& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write measure file: " + path);
  out.precision(17);
  for (int i = 0; i < m.size(); ++i)
    if (m.weight(i) > 0) out << i << " " << m.weight(i) << "\n";
}

MomentEstimate metric_moment(const DiscreteMeasure& p, double order,
                             int base_point) {
  if (!(order > 0)) fail(errc::nonpositive_order, "moment order must be > 0");
  const auto& space = *p.space();
  if (base_point < 0 || base_point >= space.size())
    fail(errc::invalid_argument, "base point out of range");
  MomentEstimate est{order, base_point, 0.0};
  if (std::isinf(order)) {
    for (int y = 0; y < space.size(); ++y)
      if (p.weight(y) > 0)
        est.value = std::max(est.value, space.dist(base_point, y));
    return est;
  }
  double acc = 0;
  for (int y = 0; y < space.size(); ++y)
    if (p.weight(y) > 0)
      acc += p.weight(y) * std::pow(space.dist(base_point, y), order);
  est.value = std::pow(acc, 1.0 / order);
  return est;
}

}  // namespace wsr
