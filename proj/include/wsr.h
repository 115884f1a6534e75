/* C interface to the Wasserstein rate toolkit. All functions return a
 * ws_status; on failure ws_last_error() describes the problem for the
 * calling thread. Returned strings are heap-allocated; release them with
 * ws_string_free. Handles are opaque and freed with their _free function.
 */
#ifndef WSR_H
#define WSR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ws_status {
  WS_OK = 0,
  WS_ERR_VALIDATION = 2, /* bad input, config, or file */
  WS_ERR_SOLVER = 3,     /* optimizer failed to certify a solution */
  WS_ERR_VERDICT = 4     /* reproduction ran but its checks failed */
} ws_status;

typedef struct ws_space ws_space;
typedef struct ws_measure ws_measure;

const char* ws_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* ws_last_error(void);

void ws_string_free(char* s);

/* Spec is a generator string like "discrete(16,1)", "grid(3,8)",
 * "cube-grid(3,16)", "path(5)", or a distance-matrix file path. */
ws_status ws_space_open(const char* spec, ws_space** out);
int ws_space_size(const ws_space* space);
void ws_space_free(ws_space* space);

/* Measure file: lines of `index weight`. */
ws_status ws_measure_load(ws_space* space, const char* path, ws_measure** out);
ws_status ws_measure_uniform(ws_space* space, ws_measure** out);
int ws_measure_size(const ws_measure* m);
double ws_measure_weight(const ws_measure* m, int i);
void ws_measure_free(ws_measure* m);

/* Exact r-Wasserstein distance between measures on the same space. */
ws_status ws_wasserstein(const ws_measure* p, const ws_measure* q, double r,
                         double* value);

/* mode: 0 exact (small spaces only), 1 greedy (certified interval).
 * On return *lower <= true count <= *upper; *exact is 1 when they agree
 * by construction. */
ws_status ws_covering_number(const ws_space* space, double eps, int mode,
                             long long* lower, long long* upper, int* exact);
ws_status ws_packing_number(const ws_space* space, double eps, int mode,
                            long long* lower, long long* upper, int* exact);

/* Nearest-center projection of q onto the given center points. */
ws_status ws_project(const ws_measure* q, const int* centers,
                     size_t center_count, ws_measure** out);

/* Evaluates the bound named by `which` ("thm1" | "thm2" | "thm3") from
 * the matching [which] section of the params config file (the section
 * must carry n). *report gets a human-readable term breakdown. */
ws_status ws_bound_from_config(const char* params_path, const char* which,
                               char** report);

/* Runs the convergence experiment described by the config file,
 * persisting CSV/manifest when the config names an output. *summary gets
 * a per-row text table. */
ws_status ws_run_experiment(const char* config_path, char** summary);

/* Reruns a canonical experiment ("finite" | "cube" | "grid").
 * Overrides: newline- or comma-separated key=value pairs (may be NULL).
 * Returns WS_ERR_VERDICT when the run completes but a check fails;
 * *report carries the check list either way. */
ws_status ws_reproduce(const char* which, const char* overrides,
                       char** report);

#ifdef __cplusplus
}
#endif

#endif /* WSR_H */
