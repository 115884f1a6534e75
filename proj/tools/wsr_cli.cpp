// Command-line front end for the Wasserstein rate toolkit; talks to the
// shared library exclusively through the C interface.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wsr.h"

namespace {

int report_failure(ws_status status) {
  std::fprintf(stderr, "error: %s\n", ws_last_error());
  return int(status);
}

int run_dist(const std::string& space_spec, const std::string& path_a,
             const std::string& path_b, double r) {
  ws_space* space = nullptr;
  ws_status status = ws_space_open(space_spec.c_str(), &space);
  if (status != WS_OK) return report_failure(status);

  ws_measure* a = nullptr;
  ws_measure* b = nullptr;
  double value = 0;
  status = ws_measure_load(space, path_a.c_str(), &a);
  if (status == WS_OK) status = ws_measure_load(space, path_b.c_str(), &b);
  if (status == WS_OK) status = ws_wasserstein(a, b, r, &value);
  if (status == WS_OK) std::printf("%.12g\n", value);

  ws_measure_free(a);
  ws_measure_free(b);
  ws_space_free(space);
  return status == WS_OK ? 0 : report_failure(status);
}

int run_count(bool covering, const std::string& space_spec, double eps,
              const std::string& mode) {
  ws_space* space = nullptr;
  ws_status status = ws_space_open(space_spec.c_str(), &space);
  if (status != WS_OK) return report_failure(status);

  long long lower = 0, upper = 0;
  int exact = 0;
  const int mode_code = mode == "exact" ? 0 : 1;
  status = covering
               ? ws_covering_number(space, eps, mode_code, &lower, &upper, &exact)
               : ws_packing_number(space, eps, mode_code, &lower, &upper, &exact);
  if (status == WS_OK) {
    if (exact)
      std::printf("%lld exact\n", lower);
    else
      std::printf("%lld %lld interval\n", lower, upper);
  }
  ws_space_free(space);
  return status == WS_OK ? 0 : report_failure(status);
}

int run_bound(const std::string& which, const std::string& params_path) {
  char* report = nullptr;
  const ws_status status = ws_bound_from_config(params_path.c_str(),
                                                which.c_str(), &report);
  if (status != WS_OK) return report_failure(status);
  std::fputs(report, stdout);
  ws_string_free(report);
  return 0;
}

int run_project(const std::string& space_spec, const std::string& measure_path,
                const std::vector<int>& centers) {
  ws_space* space = nullptr;
  ws_status status = ws_space_open(space_spec.c_str(), &space);
  if (status != WS_OK) return report_failure(status);

  ws_measure* q = nullptr;
  ws_measure* projected = nullptr;
  status = ws_measure_load(space, measure_path.c_str(), &q);
  if (status == WS_OK)
    status = ws_project(q, centers.data(), centers.size(), &projected);
  if (status == WS_OK) {
    const int m = ws_measure_size(projected);
    for (int i = 0; i < m; ++i) {
      const double w = ws_measure_weight(projected, i);
      if (w > 0) std::printf("%d %.17g\n", i, w);
    }
  }
  ws_measure_free(projected);
  ws_measure_free(q);
  ws_space_free(space);
  return status == WS_OK ? 0 : report_failure(status);
}

int run_experiment(const std::string& config_path) {
  char* summary = nullptr;
  const ws_status status = ws_run_experiment(config_path.c_str(), &summary);
  if (status != WS_OK) return report_failure(status);
  std::fputs(summary, stdout);
  ws_string_free(summary);
  return 0;
}

int run_reproduce(const std::string& which,
                  const std::vector<std::string>& overrides) {
  std::string joined;
  for (const std::string& kv : overrides) {
    if (!joined.empty()) joined += '\n';
    joined += kv;
  }
  char* report = nullptr;
  const ws_status status = ws_reproduce(
      which.c_str(), joined.empty() ? nullptr : joined.c_str(), &report);
  if (report) {
    std::fputs(report, stdout);
    ws_string_free(report);
  }
  return status == WS_OK ? 0 : report_failure(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Wasserstein distances, covering/packing counts, risk "
               "bounds, and convergence experiments on finite metric spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ws_version()));

  std::string space_spec, measure_a, measure_b, params_path, config_path, mode;
  std::string which;
  std::vector<std::string> overrides;
  std::vector<int> centers;
  double r = 1, eps = 0;

  CLI::App* dist = app.add_subcommand("dist", "Exact r-Wasserstein distance");
  dist->add_option("measureA", measure_a)->required();
  dist->add_option("measureB", measure_b)->required();
  dist->add_option("--space", space_spec, "generator spec or distance file")
      ->required();
  dist->add_option("--r", r, "Wasserstein order")->default_val(1.0);

  CLI::App* cover = app.add_subcommand("cover", "Covering number N(eps)");
  CLI::App* pack = app.add_subcommand("pack", "Packing number M(eps)");
  for (CLI::App* sub : {cover, pack}) {
    sub->add_option("space", space_spec)->required();
    sub->add_option("--eps", eps)->required();
    sub->add_option("--mode", mode)
        ->default_val("exact")
        ->check(CLI::IsMember({"exact", "greedy"}));
  }

  CLI::App* bound = app.add_subcommand("bound", "Evaluate a risk bound");
  bound->add_option("which", which)
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2", "thm3"}));
  bound->add_option("--params", params_path, "bound parameter config file")
      ->required();

  CLI::App* project = app.add_subcommand(
      "project", "Nearest-center projection onto a support set");
  project->add_option("measure", measure_a)->required();
  project->add_option("--space", space_spec)->required();
  project->add_option("--centers", centers, "center point indices")
      ->required()
      ->delimiter(',');

  CLI::App* experiment =
      app.add_subcommand("experiment", "Run a convergence experiment");
  experiment->add_option("--config", config_path)->required();

  CLI::App* reproduce =
      app.add_subcommand("reproduce", "Rerun a canonical experiment");
  reproduce->add_option("which", which)
      ->required()
      ->check(CLI::IsMember({"finite", "cube", "grid"}));
  reproduce->add_option("--override", overrides, "key=value override")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return int(WS_ERR_VALIDATION);
  }

  if (dist->parsed()) return run_dist(space_spec, measure_a, measure_b, r);
  if (cover->parsed()) return run_count(true, space_spec, eps, mode);
  if (pack->parsed()) return run_count(false, space_spec, eps, mode);
  if (bound->parsed()) return run_bound(which, params_path);
  if (project->parsed()) return run_project(space_spec, measure_a, centers);
  if (experiment->parsed()) return run_experiment(config_path);
  if (reproduce->parsed()) return run_reproduce(which, overrides);
  return int(WS_ERR_VALIDATION);
}
