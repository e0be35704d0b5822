#ifndef KPPFRONTS_H
#define KPPFRONTS_H

/* C interface to the kppfronts library: Fisher-KPP fronts in time-heterogeneous
 * environments. Every call returns a kpp_status; on failure the message is
 * available from kpp_last_error() on the same thread. Handles are opaque and
 * released with the matching *_free function (passing NULL is allowed). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KPP_API __declspec(dllexport)
#else
#define KPP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kpp_status {
    KPP_OK = 0,
    KPP_ERR_INVALID_ARGUMENT = 1,
    KPP_ERR_CONFIG = 2,
    KPP_ERR_NUMERIC = 3,
    KPP_ERR_ANALYSIS = 4,
    KPP_ERR_IO = 5,
    KPP_ERR_INTERNAL = 6
} kpp_status;

typedef enum kpp_advection { KPP_ADVECTION_UPWIND = 0, KPP_ADVECTION_CENTERED = 1 } kpp_advection;

typedef enum kpp_reaction {
    KPP_REACTION_EXACT = 0,
    KPP_REACTION_EXPLICIT = 1,
    KPP_REACTION_SEMI_IMPLICIT = 2
} kpp_reaction;

typedef struct kpp_path kpp_path;       /* sampled coefficient a(t) > 0 */
typedef struct kpp_profile kpp_profile; /* front profile on a grid, optional track */
typedef struct kpp_config kpp_config;   /* resolved experiment configuration */
typedef struct kpp_report kpp_report;   /* result of kpp_run */

typedef struct kpp_grid {
    double x_min;
    double x_max;
    double dx;
} kpp_grid;

typedef struct kpp_solver_options {
    double dt;
    kpp_advection advection;
    kpp_reaction reaction;
} kpp_solver_options;

typedef void (*kpp_warning_fn)(const char* message, void* user);

KPP_API const char* kpp_version(void);
KPP_API const char* kpp_last_error(void);
KPP_API const char* kpp_status_name(kpp_status status);
/* Routes library warnings to fn (NULL restores printing to stderr). */
KPP_API void kpp_set_warning_callback(kpp_warning_fn fn, void* user);
KPP_API kpp_solver_options kpp_solver_defaults(void);

/* Coefficient paths sampled on t_start + i*dt up to t_end. */
KPP_API kpp_status kpp_path_constant(double a, double t_start, double t_end, double dt, kpp_path** out);
KPP_API kpp_status kpp_path_periodic(double mean, double amplitude, double period, double phase, double t_start,
                                     double t_end, double dt, kpp_path** out);
KPP_API kpp_status kpp_path_h2(int n_max, int smooth, double t_start, double t_end, double dt, kpp_path** out);
KPP_API kpp_status kpp_path_bounded_noise(double relaxation_time, double volatility, double bound, uint64_t seed,
                                          double t_start, double t_end, double dt, kpp_path** out);
KPP_API kpp_status kpp_path_tabulated(const double* times, const double* values, size_t n, double t_start,
                                      double t_end, double dt, kpp_path** out);
KPP_API kpp_status kpp_path_from_samples(double t_start, double dt, const double* values, size_t n, kpp_path** out);
KPP_API void kpp_path_free(kpp_path* path);

KPP_API kpp_status kpp_path_info(const kpp_path* path, double* t_start, double* dt, size_t* n);
/* Copies min(n, size) samples into out. */
KPP_API kpp_status kpp_path_values(const kpp_path* path, double* out, size_t n);
KPP_API kpp_status kpp_path_eval(const kpp_path* path, double t, double* out);
KPP_API kpp_status kpp_path_integral(const kpp_path* path, double s, double t, double* out);
KPP_API kpp_status kpp_mean_bounds(const kpp_path* path, double window_min, double* a_lower, double* a_upper,
                                   double* a_hat);
/* C(t) = integral from the path start to t of (mu^2 + a(s)) / mu. */
KPP_API kpp_status kpp_speed_integral(const kpp_path* path, double mu, double t, double* out);
KPP_API kpp_status kpp_cocycle_residual(const kpp_path* path, double mu, double s, double t, double* out);
/* Random equilibrium Y(t) for the noise xi = a - 1. */
KPP_API kpp_status kpp_random_equilibrium(const kpp_path* a, double t, double truncation, double dq, double* Y);

/* Pullback front with decay rate mu anchored at t0, built from t0 - T. */
KPP_API kpp_status kpp_pullback_profile(const kpp_path* path, double mu, double t0, double T, const kpp_grid* grid,
                                        const kpp_solver_options* solver, kpp_profile** out);
/* Front started from a step at t0 - T, recentred so that it equals 1/2 at x = 0. */
KPP_API kpp_status kpp_critical_front(const kpp_path* path, double t0, double T, const kpp_grid* grid,
                                      const kpp_solver_options* solver, double sample_dt, kpp_profile** out);
KPP_API void kpp_profile_free(kpp_profile* profile);
KPP_API size_t kpp_profile_size(const kpp_profile* profile);
/* Copies min(n, size) grid points and values; either pointer may be NULL. */
KPP_API kpp_status kpp_profile_data(const kpp_profile* profile, double* x, double* u, size_t n);
KPP_API kpp_status kpp_profile_convergence(const kpp_profile* profile, double* estimate);
KPP_API kpp_status kpp_level_crossing(const kpp_profile* profile, double level, double* x);
/* Speed statistics of the tracked 1/2 level (critical fronts only). */
KPP_API kpp_status kpp_profile_speed(const kpp_profile* profile, double window_min, double burn_in, double* average,
                                     double* least_mean, double* largest_mean);

/* Experiments. scenario_override may be NULL or empty. */
KPP_API kpp_status kpp_config_load(const char* path, const char* scenario_override, kpp_config** out);
KPP_API kpp_status kpp_config_parse(const char* text, const char* scenario_override, kpp_config** out);
KPP_API void kpp_config_free(kpp_config* config);
KPP_API kpp_status kpp_config_set_seed(kpp_config* config, uint64_t seed);
KPP_API kpp_status kpp_config_set_output_dir(kpp_config* config, const char* dir);
/* Canonical INI text; valid until the config is modified or freed. */
KPP_API const char* kpp_config_render(const kpp_config* config);
KPP_API kpp_status kpp_run(const kpp_config* config, kpp_report** out);
KPP_API void kpp_report_free(kpp_report* report);
KPP_API int kpp_report_passed(const kpp_report* report);
KPP_API const char* kpp_report_text(const kpp_report* report, int with_checks);
KPP_API const char* kpp_report_manifest(const kpp_report* report);

#ifdef __cplusplus
}
#endif

#endif
