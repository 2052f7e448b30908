/* C API for the transmission-eigenvalue homogenization library.
 *
 * All functions return te_status; outputs go through pointer arguments.
 * Handles are opaque and must be released with the matching _free call.
 * String outputs are heap-allocated JSON documents; release them with
 * te_string_free. On failure, te_last_error_message() describes the most
 * recent error in the calling thread.
 */
#ifndef TEHOMOG_H
#define TEHOMOG_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum te_status {
    TE_OK = 0,
    TE_ERR_ARGUMENT = 1,      /* invalid argument / precondition violated */
    TE_ERR_CONFIG = 2,        /* malformed configuration */
    TE_ERR_SOLVER = 3,        /* singular system, bracket or convergence failure */
    TE_ERR_RESOLUTION = 4,    /* grid does not resolve the microstructure */
    TE_ERR_NONSIMPLE = 5,     /* eigenvalue not simple */
    TE_ERR_DEGENERATE = 6,    /* correction denominator below guard */
    TE_ERR_THRESHOLD = 7,     /* experiment ran but failed its threshold */
    TE_ERR_INTERNAL = 8
} te_status;

typedef struct te_profile te_profile;

const char* te_last_error_message(void);
void te_string_free(char* s);

/* profile construction */
te_status te_profile_piecewise(const double* breakpoints, const double* values, int count,
                               te_profile** out);
te_status te_profile_trigonometric(double mean, const double* cos_coef, int cos_count,
                                   const double* sin_coef, int sin_count, te_profile** out);
te_status te_profile_sampled(const double* samples, int count, te_profile** out);
te_status te_profile_named(const char* name, te_profile** out);
/* key = value profile block, same schema as the config file */
te_status te_profile_from_config(const char* config_text, te_profile** out);
void te_profile_free(te_profile* p);

/* profile queries */
te_status te_profile_cell_average(const te_profile* p, double* out);
te_status te_profile_c_min(const te_profile* p, double* out);
te_status te_profile_homogenized_coefficient(const te_profile* p, double* out);
te_status te_profile_value(const te_profile* p, double y, double* out);

/* cell problems: JSON report with averages, seam data and optional samples */
te_status te_cell_report(const te_profile* p, int m, int emit_samples, char** out_json);

/* spectrum */
te_status te_determinant_homog(double nbar, double tau, double* out);
te_status te_determinant_eps(const te_profile* p, double eps, double tau, int steps_per_cell,
                             double* out);
/* JSON array of {tau, simple} in [lo, hi] */
te_status te_homog_eigenvalues(double nbar, double lo, double hi, double scan_step, double tol,
                               char** out_json);
te_status te_direct_eigenvalues(const te_profile* p, double eps, double lo, double hi,
                                int steps_per_cell, double scan_step, double tol,
                                char** out_json);

/* boundary correctors: theta_star always, theta_eps when eps > 0 */
te_status te_corrector_report(const te_profile* p, double delta, double eps, int m,
                              double window_lo, double window_hi, char** out_json);

/* first-order eigenvalue correction; mode is "theta_star" or "theta_eps" */
te_status te_correction(const te_profile* p, double delta, const char* mode, double eps, int m,
                        double window_lo, double window_hi, char** out_json);

/* experiments: id in {E1..E8}; returns TE_ERR_THRESHOLD when the run
 * completes but misses its acceptance threshold */
te_status te_experiment_run(const char* config_text, const char* id, const char* output_dir,
                            char** out_json);
te_status te_suite_run(const char* config_text, const char* output_dir, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* TEHOMOG_H */
