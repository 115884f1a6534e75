#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wsr/bounds.hpp"
#include "wsr/metric_space.hpp"

namespace wsr {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// One `[name]` block of a config file: ordered key-value pairs.
struct ConfigSection {
  std::string name;
  std::map<std::string, std::string> entries;

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;             // throws parse_error
  std::string get_or(const std::string& key, std::string def) const;
  double get_real(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::vector<double> get_reals(const std::string& key) const;
  std::vector<long long> get_ints(const std::string& key) const;
};

/// Flat key-value text: `[section]` headers, `key = value` lines,
/// `#` comments, blank lines ignored.
std::vector<ConfigSection> parse_config_text(const std::string& text);
std::vector<ConfigSection> load_config(const std::string& path);

struct ExperimentConfig {
  std::string space_spec;         // generator spec or distance-matrix path
  std::string distribution_spec;  // uniform | point-mass(i) | weights:<path>
                                  // | hard-instance(k) | continuous-uniform
  double r = 1;
  std::vector<long long> n_grid;  // strictly increasing
  int trials = 1;
  uint64_t seed = 0;
  std::vector<ConfigSection> bound_specs;  // sections named bound.*
  std::string output_path;        // CSV; manifest lands beside it

  static ExperimentConfig from_sections(const std::vector<ConfigSection>& s);
  void validate() const;
};

struct ExperimentRow {
  long long n = 0;
  int trial_count = 0;
  double mean_wrr = 0;
  double stderr_wrr = 0;
  double bound_upper = 0;  // NaN when no upper spec configured
  double bound_lower = 0;  // NaN when no lower spec configured
  double wall_ms = 0;
};

struct RateFitResult {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::vector<std::pair<long long, double>> points;  // (n, mean risk)
};

/// Least-squares line on (log n, log risk).
RateFitResult fit_rate(const std::vector<std::pair<long long, double>>& points);

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::string status = "ok";  // "failed: ..." when rows are partial
  std::string csv_path;       // empty when not persisted
  std::string manifest_path;
};

/// Monte Carlo E[W_r^r(P, empirical_n)] over the configured n grid, with
/// optional bound columns. Persists CSV + JSON manifest when output_path
/// is set; on failure the rows so far are flushed with a status marker
/// before the error propagates.
ExperimentResult run_convergence_experiment(const ExperimentConfig& config);

/// Evaluates one bound.* config section at sample size n.
/// Types: thm1-limit, thm1, thm2 (uppers) and thm3 (lower).
BoundReport evaluate_bound_spec(const ConfigSection& spec, long long n);

struct ReproduceReport {
  std::string which;
  ExperimentResult result;
  RateFitResult fit;
  bool pass = false;
  std::vector<std::string> checks;  // one "ok: ..."/"FAIL: ..." per check
};

/// Canonical desk-scale experiment per example; overrides are key=value
/// pairs layered over the canonical config (keys: dims, side, trials,
/// seed, n_grid, output, r).
ReproduceReport reproduce_example(const std::string& which,
                                  const std::map<std::string, std::string>& overrides = {});

struct MultinomialRow {
  long long n = 0;
  double mean_uniform = 0, se_uniform = 0;
  double mean_worst = 0, se_worst = 0;
  double lower = 0, upper = 0;  // Fano lower, sqrt((k-1)/n) upper
};

/// Monte Carlo E||phat - p||_1 under uniform p and under the first
/// hard-instance member; asserts lower <= measured <= upper per row.
std::vector<MultinomialRow> multinomial_risk_experiment(
    int k, const std::vector<long long>& n_grid, int trials, uint64_t seed);

/// Exact W_r^r between Uniform[0,1] and the empirical measure of the
/// given sample points, via the quantile coupling in closed form.
double continuous_uniform_wrr(std::vector<double> sample, double r);

}  // namespace wsr
