#include "wsr.h"

#include <cstring>
#include <sstream>
#include <string>

#include "wsr/estimators.hpp"
#include "wsr/harness.hpp"
#include "wsr/partition.hpp"
#include "wsr/transport.hpp"

struct ws_space {
  wsr::SpacePtr impl;
};

struct ws_measure {
  wsr::DiscreteMeasure impl;
};

namespace {

thread_local std::string g_last_error = "no error";

ws_status to_status(const wsr::error& e) {
  return e.code() == wsr::errc::solver_failure ? WS_ERR_SOLVER
                                               : WS_ERR_VALIDATION;
}

template <typename Fn>
ws_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const wsr::error& e) {
    g_last_error = e.what();
    return to_status(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WS_ERR_VALIDATION;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string render_report(const wsr::BoundReport& report) {
  std::ostringstream os;
  os.precision(12);
  os << "value " << report.value << '\n';
  for (const auto& [name, value] : report.terms)
    os << "term " << name << " " << value << '\n';
  for (const auto& [key, value] : report.params)
    os << "param " << key << " " << value << '\n';
  return os.str();
}

std::string render_rows(const std::vector<wsr::ExperimentRow>& rows) {
  std::ostringstream os;
  os.precision(6);
  os << "n trial_count mean_wrr stderr bound_upper bound_lower wall_ms\n";
  for (const auto& row : rows)
    os << row.n << ' ' << row.trial_count << ' ' << row.mean_wrr << ' '
       << row.stderr_wrr << ' ' << row.bound_upper << ' ' << row.bound_lower
       << ' ' << row.wall_ms << '\n';
  return os.str();
}

}  // namespace

extern "C" {

const char* ws_version(void) { return wsr::kLibraryVersion; }

const char* ws_last_error(void) { return g_last_error.c_str(); }

void ws_string_free(char* s) { delete[] s; }

ws_status ws_space_open(const char* spec, ws_space** out) {
  return guarded([&]() {
    if (!spec || !out) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    *out = new ws_space{wsr::make_space_from_spec(spec)};
    return WS_OK;
  });
}

int ws_space_size(const ws_space* space) {
  return space ? space->impl->size() : 0;
}

void ws_space_free(ws_space* space) { delete space; }

ws_status ws_measure_load(ws_space* space, const char* path, ws_measure** out) {
  return guarded([&]() {
    if (!space || !path || !out) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    *out = new ws_measure{wsr::load_measure(space->impl, path)};
    return WS_OK;
  });
}

ws_status ws_measure_uniform(ws_space* space, ws_measure** out) {
  return guarded([&]() {
    if (!space || !out) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    *out = new ws_measure{wsr::DiscreteMeasure::uniform(space->impl)};
    return WS_OK;
  });
}

int ws_measure_size(const ws_measure* m) { return m ? m->impl.size() : 0; }

double ws_measure_weight(const ws_measure* m, int i) {
  return m && i >= 0 && i < m->impl.size() ? m->impl.weight(i) : 0.0;
}

void ws_measure_free(ws_measure* m) { delete m; }

ws_status ws_wasserstein(const ws_measure* p, const ws_measure* q, double r,
                         double* value) {
  return guarded([&]() {
    if (!p || !q || !value) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    *value = wsr::wasserstein_exact(p->impl, q->impl, r).value;
    return WS_OK;
  });
}

ws_status ws_covering_number(const ws_space* space, double eps, int mode,
                             long long* lower, long long* upper, int* exact) {
  return guarded([&]() {
    if (!space || !lower || !upper || !exact) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    const wsr::CountBound b = wsr::covering_number(
        *space->impl, eps,
        mode == 0 ? wsr::SearchMode::exact : wsr::SearchMode::greedy);
    *lower = b.lower;
    *upper = b.upper;
    *exact = b.exact ? 1 : 0;
    return WS_OK;
  });
}

ws_status ws_packing_number(const ws_space* space, double eps, int mode,
                            long long* lower, long long* upper, int* exact) {
  return guarded([&]() {
    if (!space || !lower || !upper || !exact) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    const wsr::CountBound b = wsr::packing_number(
        *space->impl, eps,
        mode == 0 ? wsr::SearchMode::exact : wsr::SearchMode::greedy);
    *lower = b.lower;
    *upper = b.upper;
    *exact = b.exact ? 1 : 0;
    return WS_OK;
  });
}

ws_status ws_project(const ws_measure* q, const int* centers,
                     size_t center_count, ws_measure** out) {
  return guarded([&]() {
    if (!q || !centers || !out) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    const wsr::PointSet d(centers, centers + center_count);
    *out = new ws_measure{wsr::voronoi_project(q->impl, d)};
    return WS_OK;
  });
}

ws_status ws_bound_from_config(const char* params_path, const char* which,
                               char** report) {
  return guarded([&]() {
    if (!params_path || !which || !report) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    const std::vector<wsr::ConfigSection> sections =
        wsr::load_config(params_path);
    for (const wsr::ConfigSection& section : sections) {
      if (section.name != which) continue;
      wsr::ConfigSection spec = section;
      if (!spec.has("type")) spec.entries["type"] = which;
      const long long n = spec.get_int("n");
      *report = dup_string(render_report(wsr::evaluate_bound_spec(spec, n)));
      return WS_OK;
    }
    g_last_error = std::string("config has no [") + which + "] section";
    return WS_ERR_VALIDATION;
  });
}

ws_status ws_run_experiment(const char* config_path, char** summary) {
  return guarded([&]() {
    if (!config_path || !summary) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    const wsr::ExperimentConfig config =
        wsr::ExperimentConfig::from_sections(wsr::load_config(config_path));
    const wsr::ExperimentResult result = wsr::run_convergence_experiment(config);
    std::string text = render_rows(result.rows);
    if (!result.csv_path.empty())
      text += "csv " + result.csv_path + "\nmanifest " + result.manifest_path +
              "\n";
    *summary = dup_string(text);
    return WS_OK;
  });
}

ws_status ws_reproduce(const char* which, const char* overrides,
                       char** report) {
  return guarded([&]() {
    if (!which || !report) {
      g_last_error = "null argument";
      return WS_ERR_VALIDATION;
    }
    std::map<std::string, std::string> kv;
    if (overrides) {
      std::string text(overrides);
      for (char& c : text)
        if (c == ',') c = '\n';
      std::istringstream is(text);
      for (std::string line; std::getline(is, line);) {
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          g_last_error = "override '" + line + "' is not key=value";
          return WS_ERR_VALIDATION;
        }
        auto trim = [](std::string s) {
          const size_t a = s.find_first_not_of(" \t\r");
          if (a == std::string::npos) return std::string();
          const size_t b = s.find_last_not_of(" \t\r");
          return s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
      }
    }
    const wsr::ReproduceReport rep = wsr::reproduce_example(which, kv);
    std::ostringstream os;
    os << render_rows(rep.result.rows);
    os.precision(6);
    os << "slope " << rep.fit.slope << " r_squared " << rep.fit.r_squared
       << '\n';
    for (const std::string& line : rep.checks) os << line << '\n';
    os << (rep.pass ? "verdict pass" : "verdict fail") << '\n';
    *report = dup_string(os.str());
    if (!rep.pass) {
      g_last_error = "reproduction checks failed";
      return WS_ERR_VERDICT;
    }
    return WS_OK;
  });
}

}  // extern "C"
