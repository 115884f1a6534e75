#include "wsr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "wsr/estimators.hpp"
#include "wsr/partition.hpp"
#include "wsr/transport.hpp"

namespace wsr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

bool ConfigSection::has(const std::string& key) const {
  return entries.count(key) != 0;
}

std::string ConfigSection::get(const std::string& key) const {
  auto it = entries.find(key);
  if (it == entries.end())
    fail(errc::parse_error, "section [" + name + "] is missing key '" + key + "'");
  return it->second;
}

std::string ConfigSection::get_or(const std::string& key, std::string def) const {
  auto it = entries.find(key);
  return it == entries.end() ? def : it->second;
}

double ConfigSection::get_real(const std::string& key) const {
  try {
    size_t pos = 0;
    const std::string v = get(key);
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  fail(errc::parse_error, "key '" + key + "' in [" + name + "] is not a real");
}

long long ConfigSection::get_int(const std::string& key) const {
  try {
    size_t pos = 0;
    const std::string v = get(key);
    const long long x = std::stoll(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  fail(errc::parse_error, "key '" + key + "' in [" + name + "] is not an integer");
}

std::vector<double> ConfigSection::get_reals(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& tok : split_ws(get(key))) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(errc::parse_error,
           "key '" + key + "' in [" + name + "]: bad real '" + tok + "'");
    }
  }
  return out;
}

std::vector<long long> ConfigSection::get_ints(const std::string& key) const {
  std::vector<long long> out;
  for (const std::string& tok : split_ws(get(key))) {
    try {
      out.push_back(std::stoll(tok));
    } catch (const std::exception&) {
      fail(errc::parse_error,
           "key '" + key + "' in [" + name + "]: bad integer '" + tok + "'");
    }
  }
  return out;
}

std::vector<ConfigSection> parse_config_text(const std::string& text) {
  std::vector<ConfigSection> sections;
  std::istringstream is(text);
  int lineno = 0;
  for (std::string raw; std::getline(is, raw);) {
    ++lineno;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(errc::parse_error,
             "line " + std::to_string(lineno) + ": unterminated section header");
      sections.push_back(ConfigSection{trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::parse_error,
           "line " + std::to_string(lineno) + ": expected 'key = value'");
    if (sections.empty())
      fail(errc::parse_error,
           "line " + std::to_string(lineno) + ": key before any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      fail(errc::parse_error, "line " + std::to_string(lineno) + ": empty key");
    sections.back().entries[key] = value;
  }
  return sections;
}

std::vector<ConfigSection> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ExperimentConfig ExperimentConfig::from_sections(
    const std::vector<ConfigSection>& sections) {
  const ConfigSection* exp = nullptr;
  ExperimentConfig c;
  for (const ConfigSection& s : sections) {
    if (s.name == "experiment") {
      exp = &s;
    } else if (s.name.rfind("bound", 0) == 0) {
      c.bound_specs.push_back(s);
    } else {
      fail(errc::parse_error, "unknown section [" + s.name + "]");
    }
  }
  if (!exp) fail(errc::parse_error, "missing [experiment] section");
  c.space_spec = exp->get_or("space", "");
  c.distribution_spec = exp->get("distribution");
  c.r = exp->get_real("r");
  c.n_grid = exp->get_ints("n_grid");
  c.trials = int(exp->get_int("trials"));
  c.seed = uint64_t(exp->get_int("seed"));
  c.output_path = exp->get_or("output", "");
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) fail(errc::invalid_argument, "empty n grid");
  for (size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) fail(errc::invalid_argument, "sample sizes must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      fail(errc::invalid_argument, "n grid must be strictly increasing");
  }
  if (trials < 1) fail(errc::invalid_argument, "trials must be >= 1");
  if (!(r >= 1)) fail(errc::invalid_argument, "order r must be >= 1");
  if (distribution_spec.empty())
    fail(errc::invalid_argument, "missing distribution spec");
  if (distribution_spec != "continuous-uniform" && space_spec.empty())
    fail(errc::invalid_argument, "missing space spec");
}

RateFitResult fit_rate(const std::vector<std::pair<long long, double>>& points) {
  if (points.size() < 2)
    fail(errc::invalid_argument, "rate fit needs at least two points");
  std::vector<double> xs, ys;
  for (const auto& [n, risk] : points) {
    if (n < 1) fail(errc::invalid_argument, "sample sizes must be >= 1");
    if (!(risk > 0))
      fail(errc::nonpositive_risk,
           "risk at n = " + std::to_string(n) + " is not positive");
    xs.push_back(std::log(double(n)));
    ys.push_back(std::log(risk));
  }
  const size_t m = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(m);
  my /= double(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) fail(errc::invalid_argument, "degenerate n grid for rate fit");

  RateFitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  fit.points = points;
  return fit;
}

namespace {

std::map<int, double> parse_radii(const ConfigSection& spec) {
  std::map<int, double> radii;
  for (const std::string& tok : split_ws(spec.get("radii"))) {
    const size_t colon = tok.find(':');
    if (colon == std::string::npos)
      fail(errc::parse_error, "radii entries must look like k:R, got '" + tok + "'");
    try {
      radii[std::stoi(tok.substr(0, colon))] = std::stod(tok.substr(colon + 1));
    } catch (const std::exception&) {
      fail(errc::parse_error, "bad radii entry '" + tok + "'");
    }
  }
  return radii;
}

std::vector<std::vector<long long>> parse_cover_rows(const ConfigSection& spec) {
  std::vector<std::vector<long long>> rows;
  std::string text = spec.get("covers");
  size_t start = 0;
  while (start <= text.size()) {
    const size_t semi = text.find(';', start);
    const std::string piece =
        text.substr(start, semi == std::string::npos ? std::string::npos
                                                     : semi - start);
    std::vector<long long> row;
    for (const std::string& tok : split_ws(piece)) {
      try {
        row.push_back(std::stoll(tok));
      } catch (const std::exception&) {
        fail(errc::parse_error, "bad covering count '" + tok + "'");
      }
    }
    rows.push_back(std::move(row));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return rows;
}

bool truthy(const std::string& v) { return v == "true" || v == "1" || v == "yes"; }

}  // namespace

BoundReport evaluate_bound_spec(const ConfigSection& spec, long long n) {
  const std::string type = spec.get("type");
  const double r = spec.get_real("r");
  if (type == "thm1-limit") {
    BoundReport report;
    report.terms.emplace_back(
        "limit", theorem1_finite_limit(int(spec.get_int("m")),
                                       spec.get_real("delta"), n, r));
    report.params["n"] = std::to_string(n);
    report.params["r"] = spec.get("r");
    report.params["m"] = spec.get("m");
    report.params["delta"] = spec.get("delta");
    report.value = report.recombine();
    return report;
  }
  if (type == "thm1") {
    const std::vector<double> eps = spec.get_reals("eps");
    const std::vector<long long> covering = spec.get_ints("covering");
    const double diam = spec.get_real("diam");
    const bool variant = truthy(spec.get_or("main-text", "false"));
    if (!truthy(spec.get_or("prefix-min", "false")))
      return theorem1_bound(eps, diam, covering, n, r, variant);
    // The bound holds for every truncation depth; take the best one.
    BoundReport best;
    int best_k = 0;
    for (size_t k = 1; k <= eps.size(); ++k) {
      std::vector<double> e(eps.begin(), eps.begin() + k);
      std::vector<long long> c(covering.begin(), covering.begin() + k);
      BoundReport rep = theorem1_bound(e, diam, c, n, r, variant);
      if (best_k == 0 || rep.value < best.value) {
        best = std::move(rep);
        best_k = int(k);
      }
    }
    best.params["prefix_k"] = std::to_string(best_k);
    return best;
  }
  if (type == "thm2") {
    const ShellTail tail = spec.get_or("tail", "bounded") == "geometric"
                               ? ShellTail::geometric
                               : ShellTail::bounded;
    std::vector<double> eps;
    if (spec.has("eps")) eps = spec.get_reals("eps");
    return theorem2_bound(spec.get_reals("w"), eps, parse_cover_rows(spec),
                          spec.get_real("moment"), spec.get_real("ell"), n, r,
                          tail);
  }
  if (type == "thm3") return theorem3_lower_bound(parse_radii(spec), n, r);
  fail(errc::parse_error, "unknown bound type '" + type + "'");
}

double continuous_uniform_wrr(std::vector<double> sample, double r) {
  if (sample.empty()) fail(errc::invalid_argument, "empty sample");
  if (!(r >= 1)) fail(errc::invalid_argument, "order r must be >= 1");
  std::sort(sample.begin(), sample.end());
  const size_t n = sample.size();
  // Quantile coupling: the i-th order statistic is matched with the
  // uniform quantile block ((i-1)/n, i/n).
  const double rp = r + 1;
  auto block = [&](double a, double b, double x) {
    if (x <= a) return (std::pow(b - x, rp) - std::pow(a - x, rp)) / rp;
    if (x >= b) return (std::pow(x - a, rp) - std::pow(x - b, rp)) / rp;
    return (std::pow(x - a, rp) + std::pow(b - x, rp)) / rp;
  };
  double acc = 0;
  for (size_t i = 0; i < n; ++i)
    acc += block(double(i) / double(n), double(i + 1) / double(n), sample[i]);
  return acc;
}

namespace {

DiscreteMeasure resolve_distribution(const ExperimentConfig& config,
                                     const SpacePtr& space) {
  const std::string& d = config.distribution_spec;
  if (d == "uniform") return DiscreteMeasure::uniform(space);
  if (d.rfind("point-mass(", 0) == 0 && d.back() == ')') {
    const int i = std::stoi(d.substr(11, d.size() - 12));
    return DiscreteMeasure::point_mass(space, i);
  }
  if (d.rfind("weights:", 0) == 0) return load_measure(space, d.substr(8));
  if (d.rfind("hard-instance(", 0) == 0 && d.back() == ')') {
    const int k = std::stoi(d.substr(14, d.size() - 15));
    if (space->size() != k)
      fail(errc::invalid_argument,
           "hard-instance(" + std::to_string(k) + ") needs a " +
               std::to_string(k) + "-point space");
    HardInstanceFamily fam = hard_instance_family(k, config.n_grid.back());
    return DiscreteMeasure(space, fam.members.front());
  }
  fail(errc::invalid_argument, "unknown distribution spec '" + d + "'");
}

std::string manifest_path_for(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return csv_path.substr(0, csv_path.size() - suffix.size()) +
           ".manifest.json";
  return csv_path + ".manifest.json";
}

void write_csv(const std::string& path, const std::vector<ExperimentRow>& rows,
               const std::string& status) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << "n,trial_count,mean_wrr,stderr,bound_upper,bound_lower,wall_ms\n";
  out.precision(17);
  for (const ExperimentRow& row : rows) {
    out << row.n << ',' << row.trial_count << ',' << row.mean_wrr << ','
        << row.stderr_wrr << ',';
    if (std::isfinite(row.bound_upper)) out << row.bound_upper;
    out << ',';
    if (std::isfinite(row.bound_lower)) out << row.bound_lower;
    out << ',' << row.wall_ms << '\n';
  }
  if (status != "ok") out << "# status=" << status << '\n';
}

void write_manifest(const std::string& path, const ExperimentConfig& config,
                    const std::string& status) {
  nlohmann::json j;
  j["config"]["space"] = config.space_spec;
  j["config"]["distribution"] = config.distribution_spec;
  j["config"]["r"] = config.r;
  j["config"]["n_grid"] = config.n_grid;
  j["config"]["trials"] = config.trials;
  j["config"]["output"] = config.output_path;
  j["seed"] = config.seed;
  j["generator_id"] = kGeneratorId;
  j["library_version"] = kLibraryVersion;
  j["status"] = status;
  j["timestamp"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  for (const ConfigSection& s : config.bound_specs) {
    nlohmann::json block;
    for (const auto& [k, v] : s.entries) block[k] = v;
    j["bound_specs"][s.name] = block;
  }
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << j.dump(2) << '\n';
}

void persist(ExperimentResult* result, const ExperimentConfig& config) {
  if (config.output_path.empty()) return;
  result->csv_path = config.output_path;
  result->manifest_path = manifest_path_for(config.output_path);
  write_csv(result->csv_path, result->rows, result->status);
  write_manifest(result->manifest_path, config, result->status);
}

}  // namespace

ExperimentResult run_convergence_experiment(const ExperimentConfig& config) {
  config.validate();
  const bool continuous = config.distribution_spec == "continuous-uniform";

  ExperimentResult result;
  try {
    SpacePtr space;
    std::optional<DiscreteMeasure> truth;
    if (!continuous) {
      space = make_space_from_spec(config.space_spec);
      truth = resolve_distribution(config, space);
    }

    uint64_t trial_counter = 0;
    for (long long n : config.n_grid) {
      const auto t0 = std::chrono::steady_clock::now();
      double sum = 0, sumsq = 0;
      for (int t = 0; t < config.trials; ++t) {
        const uint64_t s = substream_seed(config.seed, trial_counter++);
        double wrr;
        if (continuous) {
          Rng rng(s);
          std::vector<double> draws(static_cast<size_t>(n), 0.0);
          for (double& x : draws) x = rng.uniform01();
          wrr = continuous_uniform_wrr(std::move(draws), config.r);
        } else {
          const SampleBatch batch = sample(*truth, int(n), s);
          const DiscreteMeasure phat = empirical(batch);
          wrr = std::pow(wasserstein_exact(*truth, phat, config.r).value,
                         config.r);
        }
        sum += wrr;
        sumsq += wrr * wrr;
      }
      ExperimentRow row;
      row.n = n;
      row.trial_count = config.trials;
      row.mean_wrr = sum / config.trials;
      const double var =
          config.trials > 1
              ? std::max(0.0, (sumsq - sum * sum / config.trials) /
                                  (config.trials - 1))
              : 0.0;
      row.stderr_wrr = std::sqrt(var / config.trials);

      row.bound_upper = kNaN;
      row.bound_lower = kNaN;
      for (const ConfigSection& spec : config.bound_specs) {
        const BoundReport rep = evaluate_bound_spec(spec, n);
        if (spec.get("type") == "thm3") {
          row.bound_lower = std::isfinite(row.bound_lower)
                                ? std::max(row.bound_lower, rep.value)
                                : rep.value;
        } else {
          row.bound_upper = std::isfinite(row.bound_upper)
                                ? std::min(row.bound_upper, rep.value)
                                : rep.value;
        }
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      result.rows.push_back(row);
    }
  } catch (const error& e) {
    result.status = std::string("failed: ") + e.what();
    persist(&result, config);
    throw;
  }
  persist(&result, config);
  return result;
}

namespace {

// Separation of the size-k farthest-point prefix, a certified lower
// bound on the packing radius R(k).
std::map<int, double> greedy_packing_radii(const FiniteMetricSpace& space,
                                           const std::vector<int>& ks) {
  const PointSet order = farthest_point_order(space);
  const int m = space.size();
  std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
  std::vector<double> prefix_sep(m + 1,
                                 std::numeric_limits<double>::infinity());
  double sep = std::numeric_limits<double>::infinity();
  for (int k = 1; k < m; ++k) {
    const int prev = order[k - 1];
    for (int x = 0; x < m; ++x)
      nearest[x] = std::min(nearest[x], space.dist(prev, x));
    sep = std::min(sep, nearest[order[k]]);
    prefix_sep[k + 1] = sep;
  }
  std::map<int, double> radii;
  for (int k : ks)
    if (k >= 2 && k <= m) radii[k] = prefix_sep[k];
  return radii;
}

std::string radii_to_string(const std::map<int, double>& radii) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [k, v] : radii) {
    os << (first ? "" : " ") << k << ':' << v;
    first = false;
  }
  return os.str();
}

std::string seq_string(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

std::string int_seq_string(const std::vector<long long>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

struct CheckList {
  std::vector<std::string> lines;
  bool pass = true;

  void check(bool ok, const std::string& what) {
    lines.push_back((ok ? "ok: " : "FAIL: ") + what);
    pass = pass && ok;
  }
};

void check_envelope(CheckList* checks, const std::vector<ExperimentRow>& rows) {
  for (const ExperimentRow& row : rows) {
    std::ostringstream tag;
    tag << "n=" << row.n;
    if (std::isfinite(row.bound_upper))
      checks->check(row.mean_wrr - 2 * row.stderr_wrr <=
                        row.bound_upper + 1e-12,
                    tag.str() + " mean-2se <= upper bound");
    if (std::isfinite(row.bound_lower))
      checks->check(row.bound_lower <= row.mean_wrr + 2 * row.stderr_wrr + 1e-12,
                    tag.str() + " lower bound <= mean+2se");
  }
}

void check_slope(CheckList* checks, double slope, double lo, double hi,
                 const std::string& what) {
  std::ostringstream os;
  os.precision(4);
  os << what << " slope " << slope << " in [" << lo << ", " << hi << "]";
  checks->check(slope >= lo && slope <= hi, os.str());
}

std::vector<long long> dyadic_grid(long long from, long long to) {
  std::vector<long long> grid;
  for (long long n = from; n <= to; n *= 2) grid.push_back(n);
  return grid;
}

ConfigSection bound_section(std::string name,
                            std::map<std::string, std::string> entries) {
  return ConfigSection{std::move(name), std::move(entries)};
}

void apply_overrides(ExperimentConfig* config,
                     const std::map<std::string, std::string>& overrides) {
  for (const auto& [key, value] : overrides) {
    if (key == "dims") continue;  // consumed by the caller
    if (key == "trials") {
      config->trials = std::stoi(value);
    } else if (key == "seed") {
      config->seed = std::stoull(value);
    } else if (key == "output") {
      config->output_path = value;
    } else if (key == "r") {
      config->r = std::stod(value);
    } else if (key == "n_grid") {
      config->n_grid.clear();
      for (const std::string& tok : split_ws(value))
        config->n_grid.push_back(std::stoll(tok));
    } else {
      fail(errc::invalid_argument, "unknown override '" + key + "'");
    }
  }
}

}  // namespace

ReproduceReport reproduce_example(
    const std::string& which,
    const std::map<std::string, std::string>& overrides) {
  ReproduceReport report;
  report.which = which;
  CheckList checks;
  constexpr uint64_t kDefaultSeed = 20260824;

  ExperimentConfig config;
  config.r = 1;
  config.seed = kDefaultSeed;
  double slope_lo = 0, slope_hi = 0;
  bool fit_on_upper_bound = false;

  if (which == "finite") {
    config.space_spec = "discrete(16,1)";
    config.distribution_spec = "uniform";
    config.n_grid = dyadic_grid(16, 4096);
    config.trials = 200;
    config.bound_specs.push_back(bound_section(
        "bound.upper", {{"type", "thm1-limit"}, {"m", "16"}, {"delta", "1"},
                        {"r", "1"}}));
    const SpacePtr space = make_space_from_spec(config.space_spec);
    std::map<int, double> radii;
    for (int k : {2, 4, 8, 16})
      radii[k] = packing_radius(*space, k, SearchMode::exact).value;
    config.bound_specs.push_back(bound_section(
        "bound.lower",
        {{"type", "thm3"}, {"radii", radii_to_string(radii)}, {"r", "1"}}));
    slope_lo = -0.55;
    slope_hi = -0.45;
  } else if (which == "cube") {
    const int dims =
        overrides.count("dims") ? std::stoi(overrides.at("dims")) : 1;
    if (dims == 1) {
      config.distribution_spec = "continuous-uniform";
      config.n_grid = dyadic_grid(16, 4096);
      config.trials = 200;
      std::vector<double> eps;
      std::vector<long long> covering;
      for (int k = 1; k <= 12; ++k) {
        eps.push_back(std::pow(2.0, -k));
        covering.push_back(
            (long long)std::ceil(1.0 / (2.0 * eps.back()) - 1e-12));
      }
      config.bound_specs.push_back(bound_section(
          "bound.upper",
          {{"type", "thm1"}, {"eps", seq_string(eps)},
           {"covering", int_seq_string(covering)}, {"diam", "1"}, {"r", "1"},
           {"prefix-min", "true"}}));
      std::map<int, double> radii;
      for (int k : {2, 4, 16, 64, 256, 1024})
        radii[k] = 1.0 / double(k - 1);  // k equispaced points in [0,1]
      config.bound_specs.push_back(bound_section(
          "bound.lower",
          {{"type", "thm3"}, {"radii", radii_to_string(radii)}, {"r", "1"}}));
      slope_lo = -0.55;
      slope_hi = -0.45;
    } else if (dims == 3) {
      config.space_spec = "cube-grid(3,16)";
      config.distribution_spec = "uniform";
      config.n_grid = dyadic_grid(64, 16384);
      config.trials = 50;
      const SpacePtr space = make_space_from_spec(config.space_spec);
      std::vector<double> eps;
      std::vector<long long> covering;
      for (int k = 1; k <= 8; ++k) {
        eps.push_back(std::sqrt(3.0) * std::pow(2.0, -k));
        covering.push_back(
            greedy_covering_partition(space, eps.back()).cell_count());
      }
      std::ostringstream diam;
      diam.precision(17);
      diam << space->diameter();
      config.bound_specs.push_back(bound_section(
          "bound.upper",
          {{"type", "thm1"}, {"eps", seq_string(eps)},
           {"covering", int_seq_string(covering)}, {"diam", diam.str()},
           {"r", "1"}, {"prefix-min", "true"}}));
      const std::map<int, double> radii =
          greedy_packing_radii(*space, {2, 8, 64, 512, 4096});
      config.bound_specs.push_back(bound_section(
          "bound.lower",
          {{"type", "thm3"}, {"radii", radii_to_string(radii)}, {"r", "1"}}));
      slope_lo = -0.40;
      slope_hi = -0.27;
    } else {
      fail(errc::unknown_example,
           "cube reproduction supports dims 1 (continuous) and 3 (lattice)");
    }
  } else if (which == "grid") {
    config.space_spec = "grid(3,8)";
    config.distribution_spec = "uniform";
    config.n_grid = dyadic_grid(64, 16384);
    config.trials = 100;
    const SpacePtr space = make_space_from_spec(config.space_spec);
    const DiscreteMeasure uniform = DiscreteMeasure::uniform(space);
    const double ell = 4;
    const std::vector<double> radii_w = {0, 2, 4, 8};  // w_k = 2^k
    const ShellDecomposition shells = shell_decompose(uniform, 0, radii_w);
    // Any eps below the lattice pitch resolves each shell into singletons.
    const double eps1 = std::pow(2.0, -14);
    std::ostringstream covers;
    for (size_t k = 0; k < shells.shells.size(); ++k)
      covers << (k ? " ; " : "") << shells.shells[k].size();
    std::ostringstream moment;
    moment.precision(17);
    moment << metric_moment(uniform, ell, 0).value;
    std::ostringstream eps_os;
    eps_os.precision(17);
    eps_os << eps1;
    config.bound_specs.push_back(bound_section(
        "bound.upper",
        {{"type", "thm2"}, {"w", "0 2 4 8"}, {"eps", eps_os.str()},
         {"covers", covers.str()}, {"moment", moment.str()}, {"ell", "4"},
         {"r", "1"}, {"tail", "bounded"}}));
    const std::map<int, double> radii =
        greedy_packing_radii(*space, {2, 8, 64, 512});
    config.bound_specs.push_back(bound_section(
        "bound.lower",
        {{"type", "thm3"}, {"radii", radii_to_string(radii)}, {"r", "1"}}));
    slope_lo = -0.55;
    slope_hi = -0.45;
    fit_on_upper_bound = true;
  } else {
    fail(errc::unknown_example, "unknown example '" + which + "'");
  }

  apply_overrides(&config, overrides);
  report.result = run_convergence_experiment(config);

  std::vector<std::pair<long long, double>> risk_points, bound_points;
  for (const ExperimentRow& row : report.result.rows) {
    risk_points.emplace_back(row.n, row.mean_wrr);
    if (std::isfinite(row.bound_upper))
      bound_points.emplace_back(row.n, row.bound_upper);
  }
  report.fit = fit_rate(risk_points);
  if (fit_on_upper_bound) {
    const RateFitResult bound_fit = fit_rate(bound_points);
    check_slope(&checks, bound_fit.slope, slope_lo, slope_hi,
                "upper bound column");
  } else {
    check_slope(&checks, report.fit.slope, slope_lo, slope_hi, "mean risk");
  }
  check_envelope(&checks, report.result.rows);

  report.checks = std::move(checks.lines);
  report.pass = checks.pass;
  return report;
}

std::vector<MultinomialRow> multinomial_risk_experiment(
    int k, const std::vector<long long>& n_grid, int trials, uint64_t seed) {
  if (k < 1) fail(errc::invalid_argument, "need k >= 1");
  if (trials < 1) fail(errc::invalid_argument, "trials must be >= 1");

  auto mean_l1 = [&](const std::vector<double>& p, long long n,
                     uint64_t* counter, double* se) {
    std::vector<double> cdf(p.size());
    double acc = 0;
    for (size_t j = 0; j < p.size(); ++j) {
      acc += p[j];
      cdf[j] = acc;
    }
    cdf.back() = 1.0;
    double sum = 0, sumsq = 0;
    std::vector<long long> counts(p.size());
    for (int t = 0; t < trials; ++t) {
      Rng rng(substream_seed(seed, (*counter)++));
      std::fill(counts.begin(), counts.end(), 0);
      for (long long i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        ++counts[it - cdf.begin()];
      }
      double l1 = 0;
      for (size_t j = 0; j < p.size(); ++j)
        l1 += std::abs(double(counts[j]) / double(n) - p[j]);
      sum += l1;
      sumsq += l1 * l1;
    }
    const double mean = sum / trials;
    const double var =
        trials > 1 ? std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1))
                   : 0.0;
    *se = std::sqrt(var / trials);
    return mean;
  };

  std::vector<MultinomialRow> rows;
  uint64_t counter = 0;
  for (long long n : n_grid) {
    MultinomialRow row;
    row.n = n;
    const std::vector<double> uniform(k, 1.0 / k);
    row.mean_uniform = mean_l1(uniform, n, &counter, &row.se_uniform);
    if (k >= 2) {
      const HardInstanceFamily fam = hard_instance_family(k, n);
      row.mean_worst = mean_l1(fam.members.front(), n, &counter, &row.se_worst);
      row.lower = multinomial_minimax_lower(k, n);
    }
    row.upper = multinomial_l1_bound(k, n);
    if (row.lower > row.mean_uniform + 2 * row.se_uniform ||
        row.mean_uniform - 2 * row.se_uniform > row.upper ||
        row.mean_worst - 2 * row.se_worst > row.upper)
      fail(errc::invalid_argument,
           "risk envelope violated at n = " + std::to_string(n));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wsr
