/* wkam - weak KAM toolkit for weakly coupled Hamilton-Jacobi systems.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed here; every fallible call returns a wkam_status, with a
 * thread-local message available from wkam_last_error(). Components are
 * 1-based. Positions, momenta and velocities are arrays of the problem
 * dimension d (1 or 2).
 */
#ifndef WKAM_H
#define WKAM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wkam_status {
  WKAM_OK = 0,
  WKAM_ERR_ARG = 1,        /* null pointer or invalid argument */
  WKAM_ERR_PARSE = 2,      /* config or expression syntax/validation */
  WKAM_ERR_IO = 3,         /* file system failure */
  WKAM_ERR_DIVERGED = 4,   /* solver left its stability or convergence envelope */
  WKAM_ERR_INFEASIBLE = 5, /* LP infeasible */
  WKAM_ERR_BUDGET = 6,     /* declared resource limits exceeded */
  WKAM_ERR_VERIFY = 7,     /* a verification gate failed */
  WKAM_ERR_INTERNAL = 8
} wkam_status;

const char* wkam_status_name(int status);
/* Message from the most recent failing call on this thread ("" if none). */
const char* wkam_last_error(void);

/* Opaque handles ---------------------------------------------------------- */
typedef struct wkam_problem wkam_problem;   /* Hamiltonian + coupling + grids */
typedef struct wkam_ergodic wkam_ergodic;   /* stationary solution (lambda, v) */
typedef struct wkam_slab wkam_slab;         /* time-dependent solution frames */
typedef struct wkam_density wkam_density;   /* adjoint transport density */
typedef struct wkam_measure wkam_measure;   /* discrete measure on (x, q, i) */

/* Problem ------------------------------------------------------------------ */
/* Configuration text uses the same format as the CLI config files. */
wkam_status wkam_problem_from_config(const char* text, wkam_problem** out);
wkam_status wkam_problem_from_file(const char* path, wkam_problem** out);
/* Dotted key override, e.g. ("discretization.N", "128") or ("grid", "128"). */
wkam_status wkam_problem_override(wkam_problem* p, const char* key, const char* value);
void wkam_problem_free(wkam_problem* p);

wkam_status wkam_problem_dims(const wkam_problem* p, int* d, int* n, int* m);
wkam_status wkam_eval_hamiltonian(const wkam_problem* p, const double* x, const double* momentum,
                                  int component, double* out);
wkam_status wkam_eval_lagrangian(const wkam_problem* p, const double* x, const double* velocity,
                                 int component, double* out);
wkam_status wkam_eval_gradients(const wkam_problem* p, const double* x, const double* momentum,
                                int component, double* dp_out, double* dx_out);
/* JSON report of the structural assumption checks; free with wkam_string_free.
 * Returns WKAM_OK with "all_pass": false when checks fail (reported, not thrown). */
wkam_status wkam_check_assumptions(const wkam_problem* p, int sample_budget, char** json_out);

/* Ergodic problem ----------------------------------------------------------- */
wkam_status wkam_solve_ergodic(const wkam_problem* p, wkam_ergodic** out);
void wkam_ergodic_free(wkam_ergodic* e);
wkam_status wkam_ergodic_lambda(const wkam_ergodic* e, double* out);
wkam_status wkam_ergodic_residual(const wkam_ergodic* e, double* out);
/* Node-major values (component fastest); len must be n^d * m. */
wkam_status wkam_ergodic_values(const wkam_ergodic* e, double* buf, size_t len);
/* Shifts the Hamiltonian so that the ergodic constant re-solves to ~0. */
wkam_status wkam_problem_normalize(wkam_problem* p, double lambda);

/* Time-dependent problem ----------------------------------------------------- */
/* v_init = NULL starts from the ergodic solution (solved internally).
 * store_every = 0 keeps ~100 frames, 1 keeps every step (required for the
 * adjoint solve). */
wkam_status wkam_solve_cauchy(const wkam_problem* p, double eps, const wkam_ergodic* init,
                              int store_every, wkam_slab** out);
void wkam_slab_free(wkam_slab* s);
wkam_status wkam_slab_info(const wkam_slab* s, int* frames, int* total_steps, double* dt);
wkam_status wkam_slab_frame(const wkam_slab* s, int frame, double* t_out, double* buf,
                            size_t len);
wkam_status wkam_slab_write_csv(const wkam_slab* s, const char* path);
wkam_status wkam_slab_write_binary(const wkam_slab* s, const char* path);

/* Adjoint transport ------------------------------------------------------------ */
wkam_status wkam_solve_adjoint(const wkam_problem* p, const wkam_slab* u2, int x0_node,
                               int component, wkam_density** out);
void wkam_density_free(wkam_density* s);
wkam_status wkam_density_info(const wkam_density* s, int* frames, double* min_before_clip,
                              double* max_mass_drift);
wkam_status wkam_density_frame(const wkam_density* s, int frame, double* t_out, double* buf,
                               size_t len);

/* Measures ----------------------------------------------------------------------- */
wkam_status wkam_solve_mather_lp(const wkam_problem* p, wkam_measure** out, double* value);
wkam_status wkam_measure_from_adjoint(const wkam_problem* p, const wkam_slab* u2,
                                      const wkam_density* sigma, wkam_measure** out);
wkam_status wkam_example_measure(const wkam_problem* p, int x0_node, wkam_measure** out);
void wkam_measure_free(wkam_measure* mu);
wkam_status wkam_measure_action(const wkam_problem* p, const wkam_measure* mu, double* out);
wkam_status wkam_measure_holonomy_residual(const wkam_problem* p, const wkam_measure* mu,
                                           double* out);
wkam_status wkam_measure_write_csv(const wkam_measure* mu, const char* path);
wkam_status wkam_measure_summary_json(const wkam_problem* p, const wkam_measure* mu,
                                      char** json_out);

/* Pipelines ------------------------------------------------------------------------ */
/* subcommand: check | ergodic | cauchy | adjoint | mather-lp | mather-adjoint
 *           | compare | uniqueness-set | suite.
 * config_path may be NULL (built-in defaults). overrides are key=value pairs.
 * exit_code: 0 success, 1 verification failure, 2 configuration error.
 * summary_json (optional) receives the command summary. */
wkam_status wkam_run(const char* subcommand, const char* config_path,
                     const char* const* overrides, int n_overrides, char** summary_json,
                     int* exit_code);

void wkam_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* WKAM_H */
