/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the herdmarket simulator and analysis engine.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns an hm_status; on failure a human-readable message is
 * available from hm_last_error() on the calling thread until the next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with hm_string_free().
 */
#ifndef HERDMARKET_H
#define HERDMARKET_H

#include <stddef.h>
#include <stdint.h>

#if defined(HERDMARKET_BUILDING)
#define HM_API __attribute__((visibility("default")))
#else
#define HM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hm_status {
    HM_OK = 0,
    HM_ERR_USAGE = 1,      /* malformed request: unknown key, empty grid */
    HM_ERR_VALIDATION = 2, /* parameters or input data violate a constraint */
    HM_ERR_IO = 3,
    HM_ERR_DEGENERATE = 4, /* data carries no usable variation */
    HM_ERR_INTERNAL = 5
} hm_status;

typedef enum hm_regime {
    HM_REGIME_GAUSSIAN = 0,
    HM_REGIME_EXPONENTIAL = 1,
    HM_REGIME_POWERLAW = 2,
    HM_REGIME_INDETERMINATE = 3
} hm_regime;

typedef enum hm_column {
    HM_COLUMN_X = 0,
    HM_COLUMN_LN_S = 1,
    HM_COLUMN_RET = 2, /* holds length-1 values */
    HM_COLUMN_VOLUME = 3
} hm_column;

typedef enum hm_format { HM_FORMAT_CSV = 0, HM_FORMAT_JSON = 1 } hm_format;

typedef struct hm_params hm_params;
typedef struct hm_series hm_series;
typedef struct hm_report hm_report;
typedef struct hm_sweep_result hm_sweep_result;

typedef struct hm_analysis_options {
    double q_threshold;
    double tail_fraction;
    double margin_min;
    uint32_t max_lag;
    uint32_t bins;
} hm_analysis_options;

HM_API const char* hm_version(void);
HM_API const char* hm_last_error(void);
HM_API void hm_string_free(char* s);
HM_API const char* hm_regime_name(hm_regime r);

/* ---- model formulas ---------------------------------------------------- */

HM_API double hm_transition_up(double x, double phi);
HM_API double hm_transition_down(double x, double phi);
HM_API double hm_drift(double x, double phi);
HM_API double hm_diffusion(double x, double phi, uint64_t n);
HM_API double hm_clearing_log_price(double ln_s_star, double x, double lambda);
HM_API hm_status hm_trading_volume(double x, double b, uint64_t n, double* out);

/* ---- parameters -------------------------------------------------------- */

/* Starts from the reference configuration: n=100000, dt=0.1, lambda=1,
 * rho=0, sigma_f=0, x0=0, s_star_0=100, steps=100000, burn_in=1000, seed=0,
 * phi_noise=independent, boundary=clamp. */
HM_API hm_params* hm_params_create(void);
HM_API void hm_params_destroy(hm_params* p);

/* Real keys: rho, dt, lambda, a, b, sigma_f, x0, s_star_0. */
HM_API hm_status hm_params_set_double(hm_params* p, const char* key, double v);
/* Integer keys: n, m, steps, burn_in, seed. */
HM_API hm_status hm_params_set_uint(hm_params* p, const char* key, uint64_t v);
/* Option keys: phi_noise {independent, shared}, boundary {clamp, reflect}. */
HM_API hm_status hm_params_set_option(hm_params* p, const char* key,
                                      const char* value);
/* Resolves the lambda/b relation and validates. Returns the effective
 * parameter set as a JSON object string. */
HM_API hm_status hm_params_effective_json(const hm_params* p, char** out_json);

/* ---- series ------------------------------------------------------------ */

HM_API hm_status hm_simulate(const hm_params* p, hm_series** out);
/* Loads a `step,x,ln_s,ret,volume` CSV (or .json) written by this library. */
HM_API hm_status hm_series_load(const char* path, hm_series** out);
/* Loads a `date,close,volume` daily CSV and converts it to a series. */
HM_API hm_status hm_ingest_daily_csv(const char* path, const char* symbol,
                                     hm_series** out);
HM_API void hm_series_destroy(hm_series* s);

HM_API size_t hm_series_length(const hm_series* s);
HM_API int hm_series_is_simulated(const hm_series* s);
HM_API uint64_t hm_series_clamp_events(const hm_series* s);
/* Copies up to `capacity` values; *written receives the count copied. */
HM_API hm_status hm_series_copy_column(const hm_series* s, hm_column column,
                                       double* dst, size_t capacity,
                                       size_t* written);
/* Atomic write of the series in the requested format. */
HM_API hm_status hm_series_write(const hm_series* s, const char* path,
                                 hm_format format);
/* Run metadata (effective parameters, clamp events, warnings, version,
 * wall time) as JSON; `extra_json` may be NULL or a JSON object merged in. */
HM_API hm_status hm_series_meta_json(const hm_series* s, double wall_seconds,
                                     const char* extra_json, char** out_json);

/* ---- analysis ---------------------------------------------------------- */

HM_API hm_analysis_options hm_analysis_options_default(void);
HM_API hm_status hm_analyze(const hm_series* s, const hm_analysis_options* opts,
                            hm_report** out);
HM_API void hm_report_destroy(hm_report* r);
HM_API hm_regime hm_report_return_regime(const hm_report* r);
HM_API hm_regime hm_report_volume_regime(const hm_report* r);
HM_API hm_status hm_report_json(const hm_report* r, char** out_json);
/* Writes report.json plus returns_ccdf, returns_hist, volume_ccdf and
 * volume_hist as .csv (x,y) or .json into `out_dir`. */
HM_API hm_status hm_report_write(const hm_report* r, const char* out_dir,
                                 hm_format format);

/* ---- sweep ------------------------------------------------------------- */

HM_API hm_status hm_sweep_run(const hm_params* base, const double* rho_grid,
                              size_t grid_len, uint32_t replicates,
                              uint32_t workers, const hm_analysis_options* opts,
                              hm_sweep_result** out);
HM_API void hm_sweep_destroy(hm_sweep_result* r);
HM_API size_t hm_sweep_cell_count(const hm_sweep_result* r);
HM_API hm_regime hm_sweep_majority_return(const hm_sweep_result* r,
                                          size_t grid_index);
HM_API hm_regime hm_sweep_majority_volume(const hm_sweep_result* r,
                                          size_t grid_index);
/* Writes the full record JSON and the per-rho CSV summary. */
HM_API hm_status hm_sweep_write(const hm_sweep_result* r, const char* json_path,
                                const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* HERDMARKET_H */
