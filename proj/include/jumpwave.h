/* C API for the jumpwave pricing library.
 *
 * The library prices European calls under Merton jump-diffusion dynamics
 * by training a Gaussian-wavelet collocation surrogate of the pricing
 * PIDE, and cross-checks it against closed-form, Fourier and Monte-Carlo
 * reference pricers. All state lives behind opaque handles; every call
 * reports failures through jw_error and returns a jw_status code.
 */
#ifndef JUMPWAVE_H
#define JUMPWAVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define JW_API __declspec(dllexport)
#else
#define JW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jw_status {
    JW_OK = 0,
    JW_EINVAL = 1,   /* invalid argument or configuration */
    JW_EPARSE = 2,   /* scenario/solution file could not be parsed */
    JW_EDOMAIN = 3,  /* query outside the trained/padded domain */
    JW_EDIVERGED = 4,/* training or a numeric routine failed to converge */
    JW_EIO = 5,      /* file system failure */
    JW_EINTERNAL = 6 /* unexpected internal error */
} jw_status;

typedef struct jw_error {
    int code; /* jw_status */
    char message[512];
} jw_error;

typedef struct jw_scenarios jw_scenarios; /* parsed scenario file */
typedef struct jw_solution jw_solution;   /* trained or loaded surrogate */

typedef enum jw_method {
    JW_METHOD_SERIES = 0,     /* Merton jump-count series */
    JW_METHOD_CARR_MADAN = 1, /* damped-transform FFT */
    JW_METHOD_BS = 2,         /* Black-Scholes (ignores jumps) */
    JW_METHOD_MC = 3          /* Monte-Carlo on exact dynamics */
} jw_method;

JW_API const char* jw_version(void);

/* ---- scenario files ---- */

JW_API jw_status jw_scenarios_open(const char* path, jw_scenarios** out, jw_error* err);
JW_API jw_status jw_scenarios_from_text(const char* text, jw_scenarios** out, jw_error* err);
JW_API void jw_scenarios_close(jw_scenarios* s);
JW_API int jw_scenarios_count(const jw_scenarios* s);
/* Borrowed pointer, valid while the handle lives; NULL if idx out of range. */
JW_API const char* jw_scenarios_id(const jw_scenarios* s, int idx);
JW_API jw_status jw_scenarios_market(const jw_scenarios* s, const char* id,
                                     double* r, double* sigma, double* strike,
                                     double* maturity, double* lambda, double* mu_j,
                                     double* sigma_j, double* s_min, double* s_max,
                                     jw_error* err);

/* ---- fitting ---- */

/* Trains the scenario's surrogate. seed drives sampling, initialization
 * and every stochastic reference; verbose != 0 logs progress to stderr. */
JW_API jw_status jw_fit(const jw_scenarios* s, const char* id, uint64_t seed,
                        int verbose, jw_solution** out, jw_error* err);

/* Writes solution.txt, train_report.json, loss_history.csv, manifest.json. */
JW_API jw_status jw_solution_save(const jw_solution* sol, const char* dir, jw_error* err);

/* Accepts a solution file or an artifact directory containing solution.txt. */
JW_API jw_status jw_solution_open(const char* path, jw_solution** out, jw_error* err);
JW_API void jw_solution_close(jw_solution* sol);

JW_API int jw_solution_n_atoms(const jw_solution* sol);
/* Final composite training loss; NaN for solutions loaded from disk. */
JW_API double jw_solution_final_loss(const jw_solution* sol);
JW_API jw_status jw_solution_domain(const jw_solution* sol, double* s_lo, double* s_hi,
                                    double* t_lo, double* t_hi, jw_error* err);

/* ---- pricing and Greeks ---- */

JW_API jw_status jw_solution_price(const jw_solution* sol, double spot, double t,
                                   double* price, jw_error* err);
JW_API jw_status jw_solution_greeks(const jw_solution* sol, double spot, double t,
                                    double* delta, double* gamma, double* theta,
                                    jw_error* err);

/* Reference price under the solution's own market parameters. n_paths and
 * seed only matter for JW_METHOD_MC. t is calendar time; the option expires
 * at the scenario maturity. */
JW_API jw_status jw_solution_reference_price(const jw_solution* sol, jw_method method,
                                             double spot, double t, int64_t n_paths,
                                             uint64_t seed, double* price, jw_error* err);

/* Same, addressed by scenario id instead of a trained solution. */
JW_API jw_status jw_reference_price(const jw_scenarios* s, const char* id, jw_method method,
                                    double spot, double t, int64_t n_paths, uint64_t seed,
                                    double* price, jw_error* err);

/* ---- risk ---- */

typedef struct jw_risk_result {
    double mean_rel_error_pct;
    double var;
    double cvar;
    double level;
    int64_t n_paths;
} jw_risk_result;

/* Simulated long-call P&L risk for a scenario. When sol is non-NULL the
 * surrogate prices the position and mean_rel_error_pct compares it to the
 * series benchmark at the four standard probes; otherwise the series
 * pricer is used and the error column compares Carr-Madan to the series. */
JW_API jw_status jw_risk(const jw_scenarios* s, const char* id, const jw_solution* sol,
                         uint64_t seed, jw_risk_result* out, jw_error* err);

/* JSON / CSV renderings of the same report; free with jw_string_free. */
JW_API jw_status jw_risk_json(const jw_scenarios* s, const char* id, const jw_solution* sol,
                              uint64_t seed, char** json_out, jw_error* err);
JW_API jw_status jw_risk_csv_row(const jw_scenarios* s, const char* id, const jw_solution* sol,
                                 uint64_t seed, char** row_out, jw_error* err);
JW_API const char* jw_risk_csv_header(void);

/* ---- reports ---- */

/* Training report JSON / loss history CSV for a freshly fitted solution. */
JW_API jw_status jw_solution_report_json(const jw_solution* sol, char** json_out, jw_error* err);
JW_API jw_status jw_solution_history_csv(const jw_solution* sol, char** csv_out, jw_error* err);

JW_API void jw_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* JUMPWAVE_H */
