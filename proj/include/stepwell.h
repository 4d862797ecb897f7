/*
 * stepwell — spectral pricer for proportional double-barrier step call
 * options, modeled as bound states of a finite square potential well, with an
 * independent occupation-time Monte Carlo estimator.
 *
 * C API: opaque handles, status-code returns. All functions returning
 * sw_status set a thread-local message retrievable via sw_last_error() on
 * failure. Handles are destroyed with their matching *_destroy function.
 */
#ifndef STEPWELL_H
#define STEPWELL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sw_status {
    SW_OK = 0,
    SW_ERR_INVALID_ARGUMENT = 1,
    SW_ERR_DOMAIN = 2,
    SW_ERR_LEVEL_INDEX = 3,
    SW_ERR_NO_BOUND_STATES = 4,
    SW_ERR_UNSUPPORTED_CONFIG = 5,
    SW_ERR_PARSE = 6,
    SW_ERR_IO = 7,
    SW_ERR_INTERNAL = 8
} sw_status;

const char* sw_status_name(sw_status status);
const char* sw_last_error(void);
const char* sw_version(void);

/* ---- barrier corridor ---- */

typedef struct sw_well sw_well;

sw_status sw_well_create(double a, double b, double v0, sw_well** out);
void sw_well_destroy(sw_well* well);

/* ---- deterministic parameter curves ---- */

typedef struct sw_curve sw_curve;

sw_status sw_curve_constant(double c0, sw_curve** out);
sw_status sw_curve_affine(double c0, double c1, sw_curve** out);
sw_status sw_curve_exp_decay(double c0, double c1, sw_curve** out);
/* "const:0.05" | "affine:0.05,0.01" | "expdecay:0.04,0.01" */
sw_status sw_curve_parse(const char* text, sw_curve** out);
sw_status sw_curve_format(const sw_curve* curve, char* buf, size_t buf_len);
double sw_curve_eval(const sw_curve* curve, double t);
void sw_curve_destroy(sw_curve* curve);

/* ---- bound-state spectrum ---- */

typedef struct sw_spectrum sw_spectrum;

typedef struct sw_level {
    int n;
    double k1;
    double k2;
    double a1;
    double a2; /* tail amplitude at the barrier, signed */
    int is_even_function;
} sw_level;

sw_status sw_spectrum_solve(const sw_well* well, double sigma, sw_spectrum** out);
int sw_spectrum_count(const sw_spectrum* spectrum);
double sw_spectrum_beta(const sw_spectrum* spectrum);
sw_status sw_spectrum_level(const sw_spectrum* spectrum, int n, sw_level* out);
double sw_spectrum_wavefunction(const sw_spectrum* spectrum, int n, double x);
void sw_spectrum_destroy(sw_spectrum* spectrum);

/* count without building a spectrum handle */
sw_status sw_count_bound_states(const sw_well* well, double sigma, int* out);

/* ---- pricing ---- */

typedef struct sw_price_info {
    double price;
    double big_gamma;   /* discount exponent Gamma */
    int terms_used;
    int dropped_tails;  /* outer-tail terms dropped as divergent */
} sw_price_info;

typedef enum sw_eigen_mode {
    SW_EIGEN_EXACT = 0, /* re-solve the level equation per time node */
    SW_EIGEN_APPROX = 1 /* low-energy formula */
} sw_eigen_mode;

typedef enum sw_td_gauge {
    SW_GAUGE_CENTERED = 0,     /* drift tilt anchored at the corridor midpoint */
    SW_GAUGE_RAW_LOG_PRICE = 1 /* tilt on absolute log-price */
} sw_td_gauge;

/* x is the initial log-price; max_terms <= 0 uses every bound state. */
sw_status sw_price_const(const sw_well* well, double strike, double tau, double r, double sigma,
                         double x, int max_terms, sw_price_info* out);

sw_status sw_price_sdb_limit(const sw_well* well, double strike, double tau, double r,
                             double sigma, double x, double* out);

sw_status sw_price_td(const sw_well* well, double strike, double tau, const sw_curve* r_curve,
                      const sw_curve* sigma_curve, double x, int n_steps, sw_eigen_mode mode,
                      sw_td_gauge gauge, int max_terms, sw_price_info* out);

/* ---- Monte Carlo estimator ---- */

typedef struct sw_mc_estimate {
    double mean;
    double std_err;
    double ci_lo;
    double ci_hi;
    long long paths_used;
} sw_mc_estimate;

sw_status sw_mc_price(const sw_well* well, double strike, double tau, const sw_curve* r_curve,
                      const sw_curve* sigma_curve, double s0, long long paths,
                      int steps_per_year, uint64_t seed, int antithetic, sw_mc_estimate* out);

/* ---- validation suite ---- */

/*
 * options_json (may be NULL for defaults):
 *   {"only":[1,2,...], "corrupt":<check id>, "mc_paths":N,
 *    "mc_steps_per_year":N, "mc_vanilla_paths":N}
 * On success *report_json is a malloc'd JSON document (free with sw_free) and
 * *all_passed is 1 when every executed check passed.
 */
sw_status sw_validate(const char* options_json, char** report_json, int* all_passed);
void sw_free(char* ptr);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STEPWELL_H */
