#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"

#include "wsr/harness.hpp"

using namespace wsr;
using wsr::testing::throws_code;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// CSV content minus the trailing wall-clock column, which is the only
// nondeterministic field.
std::string csv_without_timing(const std::string& path) {
  std::istringstream in(slurp(path));
  std::ostringstream out;
  for (std::string line; std::getline(in, line);) {
    const size_t comma = line.rfind(',');
    out << (comma == std::string::npos ? line : line.substr(0, comma)) << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const std::string text =
      "# leading comment\n"
      "[experiment]\n"
      "r = 1.5   # trailing comment\n"
      "n_grid = 16 32 64\n"
      "\n"
      "[bound.upper]\n"
      "type=thm1-limit\n";
  const std::vector<ConfigSection> sections = parse_config_text(text);
  REQUIRE(sections.size() == 2);
  CHECK(sections[0].name == "experiment");
  CHECK(sections[0].get_real("r") == 1.5);
  CHECK(sections[0].get_ints("n_grid") == std::vector<long long>{16, 32, 64});
  CHECK(sections[1].get("type") == "thm1-limit");
  CHECK(sections[1].get_or("missing", "fallback") == "fallback");
  CHECK(!sections[1].has("missing"));

  CHECK(throws_code(errc::parse_error,
                    [] { parse_config_text("key = before section\n"); }));
  CHECK(throws_code(errc::parse_error,
                    [] { parse_config_text("[experiment\nr = 1\n"); }));
  CHECK(throws_code(errc::parse_error,
                    [] { parse_config_text("[a]\nno equals sign\n"); }));
  CHECK(throws_code(errc::parse_error,
                    [] { parse_config_text("[a]\n= empty key\n"); }));
  CHECK(throws_code(errc::parse_error, [&] { sections[0].get("absent"); }));
  CHECK(throws_code(errc::parse_error, [&] { sections[1].get_real("type"); }));
  CHECK(throws_code(errc::parse_error, [&] { sections[1].get_int("type"); }));
  CHECK(throws_code(errc::io_error, [] { load_config("/no/such/file.cfg"); }));
}

TEST_CASE("experiment config assembly") {
  const std::string text =
      "[experiment]\n"
      "space = discrete(4,1)\n"
      "distribution = uniform\n"
      "r = 1\n"
      "n_grid = 8 16\n"
      "trials = 3\n"
      "seed = 7\n"
      "[bound.upper]\n"
      "type = thm1-limit\n"
      "m = 4\n"
      "delta = 1\n"
      "r = 1\n";
  const ExperimentConfig c =
      ExperimentConfig::from_sections(parse_config_text(text));
  CHECK(c.space_spec == "discrete(4,1)");
  CHECK(c.trials == 3);
  CHECK(c.seed == 7);
  REQUIRE(c.bound_specs.size() == 1);
  CHECK(c.bound_specs[0].name == "bound.upper");

  CHECK(throws_code(errc::parse_error, [] {
    ExperimentConfig::from_sections(parse_config_text("[mystery]\nx = 1\n"));
  }));
  CHECK(throws_code(errc::parse_error, [] {
    ExperimentConfig::from_sections(parse_config_text("[bound.x]\ntype = thm3\n"));
  }));

  ExperimentConfig bad = c;
  bad.n_grid = {16, 8};
  CHECK(throws_code(errc::invalid_argument, [&] { bad.validate(); }));
  bad.n_grid = {};
  CHECK(throws_code(errc::invalid_argument, [&] { bad.validate(); }));
  bad = c;
  bad.trials = 0;
  CHECK(throws_code(errc::invalid_argument, [&] { bad.validate(); }));
  bad = c;
  bad.r = 0.5;
  CHECK(throws_code(errc::invalid_argument, [&] { bad.validate(); }));
}

TEST_CASE("rate fitting") {
  // Exact power law risk = 10 / n.
  std::vector<std::pair<long long, double>> pts;
  for (long long n : {16, 32, 64, 128}) pts.emplace_back(n, 10.0 / double(n));
  const RateFitResult fit = fit_rate(pts);
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(10.0)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));

  pts.clear();
  for (long long n : {16, 64, 256, 1024})
    pts.emplace_back(n, std::sqrt(15.0 / double(n)));
  CHECK(fit_rate(pts).slope == doctest::Approx(-0.5).epsilon(1e-12));

  CHECK(throws_code(errc::invalid_argument,
                    [] { fit_rate({{16, 1.0}}); }));
  CHECK(throws_code(errc::nonpositive_risk,
                    [] { fit_rate({{16, 1.0}, {32, 0.0}}); }));
  CHECK(throws_code(errc::invalid_argument,
                    [] { fit_rate({{16, 1.0}, {16, 2.0}}); }));
}

TEST_CASE("continuous uniform transport cost") {
  // One sample at 1/2: W_1 = int |x - 1/2| dx = 1/4; W_2^2 = 1/12.
  CHECK(continuous_uniform_wrr({0.5}, 1.0) == doctest::Approx(0.25));
  CHECK(continuous_uniform_wrr({0.5}, 2.0) == doctest::Approx(1.0 / 12.0));
  // One sample at 0: W_1 = int x dx = 1/2.
  CHECK(continuous_uniform_wrr({0.0}, 1.0) == doctest::Approx(0.5));
  // The ideal sample (2i-1)/(2n) costs n * 2 * (1/(2n))^2 / 2 = 1/(4n).
  const int n = 8;
  std::vector<double> ideal;
  for (int i = 1; i <= n; ++i) ideal.push_back((2.0 * i - 1) / (2.0 * n));
  CHECK(continuous_uniform_wrr(ideal, 1.0) == doctest::Approx(0.25 / n));

  // Cross-check against brute-force Riemann integration of the quantile
  // coupling cost int_0^1 |F^-1(u) - u|^r du.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int it = 0; it < 10; ++it) {
    std::vector<double> xs(6);
    for (double& x : xs) x = unif(rng);
    std::sort(xs.begin(), xs.end());
    for (double r : {1.0, 2.0}) {
      const int steps = 200000;
      double riemann = 0;
      for (int s = 0; s < steps; ++s) {
        const double u = (s + 0.5) / steps;
        const double inv = xs[std::min<int>(int(u * 6), 5)];
        riemann += std::pow(std::abs(inv - u), r) / steps;
      }
      CHECK(continuous_uniform_wrr(xs, r) ==
            doctest::Approx(riemann).epsilon(1e-3));
    }
  }

  CHECK(throws_code(errc::invalid_argument,
                    [] { continuous_uniform_wrr({}, 1.0); }));
  CHECK(throws_code(errc::invalid_argument,
                    [] { continuous_uniform_wrr({0.5}, 0.5); }));
}

TEST_CASE("bound spec evaluation") {
  ConfigSection limit{"bound.upper",
                      {{"type", "thm1-limit"}, {"m", "16"}, {"delta", "1"},
                       {"r", "1"}}};
  CHECK(evaluate_bound_spec(limit, 64).value ==
        doctest::Approx(std::sqrt(15.0 / 64.0)));

  ConfigSection thm1{"bound.upper",
                     {{"type", "thm1"}, {"eps", "0.5 0.25"},
                      {"covering", "2 4"}, {"diam", "1"}, {"r", "1"}}};
  const double full = evaluate_bound_spec(thm1, 100).value;
  thm1.entries["prefix-min"] = "true";
  const BoundReport best = evaluate_bound_spec(thm1, 100);
  CHECK(best.value <= full + 1e-15);
  CHECK(best.params.count("prefix_k") == 1);

  ConfigSection thm3{"bound.lower",
                     {{"type", "thm3"}, {"radii", "2:1.0 4:0.5"}, {"r", "1"}}};
  const BoundReport lower = evaluate_bound_spec(thm3, 100);
  CHECK(lower.aggregate == BoundReport::Aggregate::sup);
  CHECK(lower.value > 0);

  ConfigSection badradii{"bound.lower",
                         {{"type", "thm3"}, {"radii", "nonsense"}, {"r", "1"}}};
  CHECK(throws_code(errc::parse_error,
                    [&] { evaluate_bound_spec(badradii, 100); }));
  ConfigSection unknown{"bound.x", {{"type", "thm9"}, {"r", "1"}}};
  CHECK(throws_code(errc::parse_error,
                    [&] { evaluate_bound_spec(unknown, 100); }));

  ConfigSection thm2{"bound.upper",
                     {{"type", "thm2"}, {"w", "0"}, {"eps", "0.25"},
                      {"covers", "4"}, {"moment", "1"}, {"ell", "1"},
                      {"r", "1"}}};
  CHECK(evaluate_bound_spec(thm2, 100).value ==
        doctest::Approx(0.25 + 0.25 * 0.2));
}

TEST_CASE("convergence experiment") {
  ExperimentConfig config;
  config.space_spec = "discrete(4,1)";
  config.distribution_spec = "uniform";
  config.r = 1;
  config.n_grid = {8, 32, 128};
  config.trials = 20;
  config.seed = 99;
  config.bound_specs.push_back(ConfigSection{
      "bound.upper",
      {{"type", "thm1-limit"}, {"m", "4"}, {"delta", "1"}, {"r", "1"}}});

  const ExperimentResult res = run_convergence_experiment(config);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.status == "ok");
  double prev = 1e9;
  for (const ExperimentRow& row : res.rows) {
    CHECK(row.trial_count == 20);
    CHECK(row.mean_wrr > 0);
    CHECK(row.mean_wrr < prev);
    CHECK(row.mean_wrr - 2 * row.stderr_wrr <= row.bound_upper + 1e-12);
    CHECK(std::isnan(row.bound_lower));
    prev = row.mean_wrr;
  }

  // Identical configs produce byte-identical CSV artifacts.
  config.output_path = "exp_a.csv";
  run_convergence_experiment(config);
  config.output_path = "exp_b.csv";
  const ExperimentResult second = run_convergence_experiment(config);
  CHECK(csv_without_timing("exp_a.csv") == csv_without_timing("exp_b.csv"));
  CHECK(second.manifest_path == "exp_b.manifest.json");
  const std::string manifest = slurp("exp_b.manifest.json");
  CHECK(manifest.find("splitmix64/mt19937_64/invcdf-v1") != std::string::npos);
  CHECK(manifest.find("\"status\": \"ok\"") != std::string::npos);
  // The lower-bound column is absent, so its CSV field is empty.
  const std::string csv = slurp("exp_a.csv");
  CHECK(csv.find(",,") != std::string::npos);
  for (const char* f : {"exp_a.csv", "exp_a.manifest.json", "exp_b.csv",
                        "exp_b.manifest.json"})
    std::remove(f);

  // A point mass is reproduced exactly by any sample: zero risk.
  config.output_path.clear();
  config.distribution_spec = "point-mass(2)";
  config.bound_specs.clear();
  for (const ExperimentRow& row : run_convergence_experiment(config).rows)
    CHECK(row.mean_wrr == 0.0);

  config.distribution_spec = "no-such-distribution";
  CHECK(throws_code(errc::invalid_argument,
                    [&] { run_convergence_experiment(config); }));
}

TEST_CASE("continuous-uniform experiment path") {
  ExperimentConfig config;
  config.distribution_spec = "continuous-uniform";
  config.r = 1;
  config.n_grid = {16, 256};
  config.trials = 50;
  config.seed = 5;
  const ExperimentResult res = run_convergence_experiment(config);
  REQUIRE(res.rows.size() == 2);
  // E W_1 ~ sqrt(1/(6n)) for uniform on [0,1]; just sanity-band it.
  CHECK(res.rows[0].mean_wrr > 0.05);
  CHECK(res.rows[0].mean_wrr < 0.2);
  CHECK(res.rows[1].mean_wrr < res.rows[0].mean_wrr);
}

TEST_CASE("multinomial risk experiment") {
  const std::vector<MultinomialRow> rows =
      multinomial_risk_experiment(2, {64, 1024}, 200, 17);
  REQUIRE(rows.size() == 2);
  for (const MultinomialRow& row : rows) {
    CHECK(row.lower <= row.mean_uniform + 2 * row.se_uniform);
    CHECK(row.mean_uniform - 2 * row.se_uniform <= row.upper);
    CHECK(row.mean_worst - 2 * row.se_worst <= row.upper);
  }
  CHECK(rows[1].mean_uniform < rows[0].mean_uniform);

  // k = 1 is degenerate: the estimate is always exact.
  const std::vector<MultinomialRow> flat =
      multinomial_risk_experiment(1, {16}, 10, 0);
  CHECK(flat[0].mean_uniform == 0.0);
  CHECK(flat[0].upper == 0.0);

  CHECK(throws_code(errc::invalid_argument,
                    [] { multinomial_risk_experiment(0, {16}, 10, 0); }));
}

TEST_CASE("reproduce handles unknown examples") {
  CHECK(throws_code(errc::unknown_example, [] { reproduce_example("mystery"); }));
  CHECK(throws_code(errc::unknown_example, [] {
    reproduce_example("cube", {{"dims", "2"}});
  }));
  CHECK(throws_code(errc::invalid_argument, [] {
    reproduce_example("finite", {{"bogus", "1"}});
  }));
}

TEST_CASE("reproduce finite at desk scale") {
  // Scaled-down run: the structural outputs (checks, fit, artifacts) are
  // exercised; the full-budget run lives in the acceptance suite.
  const ReproduceReport rep = reproduce_example(
      "finite", {{"trials", "40"}, {"n_grid", "64 256 1024 4096"}});
  CHECK(rep.which == "finite");
  REQUIRE(rep.result.rows.size() == 4);
  CHECK(!rep.checks.empty());
  CHECK(rep.fit.slope < -0.3);
  for (const ExperimentRow& row : rep.result.rows) {
    CHECK(std::isfinite(row.bound_upper));
    CHECK(std::isfinite(row.bound_lower));
    CHECK(row.bound_lower < row.bound_upper);
  }
}
