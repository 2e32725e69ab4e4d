/* C interface of the shocklab library.
 *
 * Every function returns a shk_status. On failure the message is available from
 * shk_last_error() until the next failing call on the same thread. Handles are opaque and
 * owned by the caller; release them with the matching *_destroy function (NULL is allowed).
 * String outputs use the size query convention: pass buf = NULL or a too-small cap to get the
 * required size (including the terminating NUL) in *needed.
 */
#ifndef SHOCKLAB_H
#define SHOCKLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SHK_API __declspec(dllexport)
#elif defined(__GNUC__)
#define SHK_API __attribute__((visibility("default")))
#else
#define SHK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum shk_status {
  SHK_OK = 0,
  SHK_ERR_DOMAIN = 1,
  SHK_ERR_SOLVER = 2,
  SHK_ERR_EVALUATION = 3,
  SHK_ERR_QUADRATURE = 4,
  SHK_ERR_DIAGNOSTICS = 5,
  SHK_ERR_CONFIG = 6,
  SHK_ERR_IO = 7,
  SHK_ERR_INVALID_ARGUMENT = 8,
  SHK_ERR_BUFFER_TOO_SMALL = 9,
  SHK_ERR_INTERNAL = 10
} shk_status;

SHK_API const char* shk_last_error(void);
SHK_API const char* shk_status_name(shk_status s);
SHK_API const char* shk_version(void);

/* ---- shock profile --------------------------------------------------------------------- */

typedef struct shk_profile shk_profile;
typedef struct shk_config shk_config;

typedef struct shk_end_states {
  double gamma, v_minus, u_minus, v_plus, u_plus, sigma, eps, p_minus, p_plus;
} shk_end_states;

typedef struct shk_profile_report {
  double rh_residual;       /* Rankine-Hugoniot residual */
  double ode_residual;      /* profile ODE residual */
  int monotone;             /* 1 when the profile is strictly monotone on the nodes */
  double rate_left;         /* fitted tail decay rates */
  double rate_right;
  double kappa;             /* eps / (2 alpha_gamma) */
  double tail_gap;          /* max distance of the window ends to the end states */
} shk_profile_report;

SHK_API shk_status shk_profile_create(double gamma, double v_minus, double u_minus, double eps,
                                      shk_profile** out);
/* Same with gamma, v_minus, u_minus and eps taken from a configuration. */
SHK_API shk_status shk_profile_create_from_config(const shk_config* c, shk_profile** out);
SHK_API void shk_profile_destroy(shk_profile* p);
SHK_API shk_status shk_profile_end_states(const shk_profile* p, shk_end_states* out);
SHK_API shk_status shk_profile_report_get(const shk_profile* p, shk_profile_report* out);
/* Sup norm of the semi-discrete right side on the profile sampled with spacing dx over the
 * default domain. */
SHK_API shk_status shk_profile_steady_residual(const shk_profile* p, double dx, double* out);
/* Columns xi,v,h,p,dp,a,da,d2a on n points of [xi_lo, xi_hi] with weight strength lambda. */
SHK_API shk_status shk_profile_write_csv(const shk_profile* p, double lambda, double xi_lo, double xi_hi,
                                         size_t n, const char* path);

/* ---- experiment configuration ----------------------------------------------------------- */

SHK_API shk_status shk_config_create(shk_config** out);
SHK_API void shk_config_destroy(shk_config* c);
SHK_API shk_status shk_config_load(shk_config* c, const char* path);
SHK_API shk_status shk_config_parse(shk_config* c, const char* text);
SHK_API shk_status shk_config_set(shk_config* c, const char* key, const char* value);
SHK_API shk_status shk_config_to_text(const shk_config* c, char* buf, size_t cap, size_t* needed);
/* Weight strength after applying the lambda_factor / lambda_cap defaults. */
SHK_API shk_status shk_config_resolved_lambda(const shk_config* c, double* out);

/* ---- experiments ------------------------------------------------------------------------ */

typedef struct shk_experiment shk_experiment;

SHK_API shk_status shk_experiment_run(const shk_config* c, shk_experiment** out);
/* Starts from a checkpoint written by shk_experiment_write_checkpoint. */
SHK_API shk_status shk_experiment_resume(const shk_config* c, const char* checkpoint, shk_experiment** out);
SHK_API void shk_experiment_destroy(shk_experiment* e);
SHK_API shk_status shk_experiment_passed(const shk_experiment* e, int* passed);
SHK_API shk_status shk_experiment_records(const shk_experiment* e, size_t* n);
SHK_API shk_status shk_experiment_summary_json(const shk_experiment* e, char* buf, size_t cap, size_t* needed);
SHK_API shk_status shk_experiment_write_trace(const shk_experiment* e, const char* path);
SHK_API shk_status shk_experiment_write_summary(const shk_experiment* e, const char* path);
/* Columns xi,v,h of the final state. */
SHK_API shk_status shk_experiment_write_snapshot(const shk_experiment* e, const char* path);
/* Little-endian binary: magic "SHKCKPT1", u32 version, u32 reserved, u64 N, f64 xi_min, xi_max,
 * t, X, then N f64 v and N f64 h. */
SHK_API shk_status shk_experiment_write_checkpoint(const shk_experiment* e, const char* path);

/* ---- identity audit --------------------------------------------------------------------- */

SHK_API shk_status shk_audit_run(const shk_config* c, const int* refinements, size_t n, const char* json_path,
                                 int* within_tolerance, int* ratios_in_range);

/* ---- sweeps ----------------------------------------------------------------------------- */

typedef struct shk_sweep_fits {
  double tail_exponent_left, tail_exponent_right, dy_exponent, probe_exponent;
  size_t rows, failed;
} shk_sweep_fits;

SHK_API shk_status shk_sweep_run(const shk_config* base, const double* eps, size_t n_eps, const double* factors,
                                 size_t n_factors, int run_experiments, const char* csv_path,
                                 const char* json_path, shk_sweep_fits* out);

/* ---- functional inequalities ------------------------------------------------------------ */

typedef struct shk_verify_options {
  double g_step;
  double g_eta;
  int poincare_polys;
  double algebra_delta;
  double algebra_delta1;
  double algebra_step;
  double r_delta;
  double r_c1;
  int r_starts;
  int r_points;
  int search_delta;
  uint64_t seed;
} shk_verify_options;

SHK_API void shk_verify_options_default(shk_verify_options* o);
/* Writes one JSON certification report per target into out_dir plus certification.json. */
SHK_API shk_status shk_verify_inequalities(const shk_verify_options* o, const char* out_dir, int* passed,
                                           char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* SHOCKLAB_H */
