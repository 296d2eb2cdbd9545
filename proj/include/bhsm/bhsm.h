/* bhsm - barrier-gain higher-order sliding mode control toolkit.
 *
 * C interface of the shared library. All functions returning bhsm_status
 * report BHSM_OK on success; on failure they leave outputs untouched and
 * record a thread-local message retrievable via bhsm_last_error(). Objects
 * are opaque handles released with their matching _free function.
 */
#ifndef BHSM_H
#define BHSM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BHSM_API __declspec(dllexport)
#else
#define BHSM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bhsm_status {
  BHSM_OK = 0,
  BHSM_ERR_DOMAIN = 1,            /* argument outside mathematical domain */
  BHSM_ERR_PARAM = 2,             /* out-of-range parameter */
  BHSM_ERR_SHAPE = 3,             /* vector length mismatch */
  BHSM_ERR_CONFIG = 4,            /* bad scenario/controller configuration */
  BHSM_ERR_CONTRACT = 5,          /* stateful-call contract broken */
  BHSM_ERR_DIVERGENCE = 6,        /* simulation state blew up */
  BHSM_ERR_INSUFFICIENT_DATA = 7, /* not enough samples for an estimate */
  BHSM_ERR_IO = 8,                /* file read/write failure */
  BHSM_ERR_INVALID_HANDLE = 9,    /* null or wrong handle */
  BHSM_ERR_INTERNAL = 10
} bhsm_status;

typedef struct bhsm_scenario bhsm_scenario;
typedef struct bhsm_trace bhsm_trace;
typedef struct bhsm_metrics bhsm_metrics;
typedef struct bhsm_verify_report bhsm_verify_report;

BHSM_API const char* bhsm_version(void);

/* Message of the last failure on the calling thread ("" when none). */
BHSM_API const char* bhsm_last_error(void);

/* Frees any string returned by a bhsm_*_to_json function. */
BHSM_API void bhsm_string_free(char* s);

/* --------------------------------------------------------------------------
 * Scenarios
 * ------------------------------------------------------------------------ */

BHSM_API bhsm_status bhsm_scenario_load(const char* path, bhsm_scenario** out);
BHSM_API bhsm_status bhsm_scenario_parse(const char* text, const char* name, bhsm_scenario** out);
BHSM_API bhsm_status bhsm_scenario_clone(const bhsm_scenario* scenario, bhsm_scenario** out);
BHSM_API void bhsm_scenario_free(bhsm_scenario* scenario);

BHSM_API int bhsm_scenario_order(const bhsm_scenario* scenario);
BHSM_API double bhsm_scenario_tau(const bhsm_scenario* scenario);
BHSM_API double bhsm_scenario_horizon(const bhsm_scenario* scenario);

/* Overrides for parameter sweeps. */
BHSM_API bhsm_status bhsm_scenario_set_tau(bhsm_scenario* scenario, double tau);
BHSM_API bhsm_status bhsm_scenario_set_record_stride(bhsm_scenario* scenario, uint32_t stride);

/* --------------------------------------------------------------------------
 * Simulation
 * ------------------------------------------------------------------------ */

/* Run options; initialize with bhsm_run_options_default. Window bounds may be
 * NaN to select the default final third of the horizon. */
typedef struct bhsm_run_options {
  double window_t0;
  double window_t1;
  double trap_tol;
} bhsm_run_options;

BHSM_API bhsm_run_options bhsm_run_options_default(void);

BHSM_API bhsm_status bhsm_simulate(const bhsm_scenario* scenario, bhsm_trace** out_trace);

/* Runs the scenario and derives the summary from the full-resolution step
 * stream (the stored trace is still decimated per record_stride). Either
 * output pointer may be NULL when not needed. */
BHSM_API bhsm_status bhsm_simulate_with_metrics(const bhsm_scenario* scenario, const bhsm_run_options* options,
                                                bhsm_trace** out_trace, bhsm_metrics** out_metrics);

/* --------------------------------------------------------------------------
 * Traces
 * ------------------------------------------------------------------------ */

BHSM_API void bhsm_trace_free(bhsm_trace* trace);
BHSM_API size_t bhsm_trace_size(const bhsm_trace* trace);
BHSM_API int bhsm_trace_order(const bhsm_trace* trace);
/* Latch time, or NaN when the run never latched (or has no schedule). */
BHSM_API double bhsm_trace_latch_time(const bhsm_trace* trace);
BHSM_API uint64_t bhsm_trace_clamp_events(const bhsm_trace* trace);

/* Row accessors; index must be < bhsm_trace_size. z must hold order doubles.
 * eta/phi_hat are NaN for traces without schedule columns. */
BHSM_API bhsm_status bhsm_trace_row(const bhsm_trace* trace, size_t index, double* t, double* z, double* u,
                                    double* V, double* eta, double* phi_hat);

BHSM_API bhsm_status bhsm_trace_write_csv(const bhsm_trace* trace, const char* path);
BHSM_API bhsm_status bhsm_trace_read_csv(const char* path, bhsm_trace** out);

/* --------------------------------------------------------------------------
 * Metrics
 * ------------------------------------------------------------------------ */

BHSM_API void bhsm_metrics_free(bhsm_metrics* metrics);

/* Recomputes the summary from a stored trace and its scenario. */
BHSM_API bhsm_status bhsm_metrics_from_trace(const bhsm_trace* trace, const bhsm_scenario* scenario,
                                             const bhsm_run_options* options, bhsm_metrics** out);

/* Scalar field by name: "latch_time", "trap_violations", "max_trap_excess",
 * "gain_sup_late", "gain_bound", "phi_bar_bar", "h_m", "clamp_events".
 * Returns BHSM_OK with *present = 0 when the field is undefined for the run. */
BHSM_API bhsm_status bhsm_metrics_get(const bhsm_metrics* metrics, const char* field, double* value,
                                      int* present);

/* Per-component arrays "steady_sup" and "accuracy_lambdas"; values must hold
 * the chain order doubles. */
BHSM_API bhsm_status bhsm_metrics_get_array(const bhsm_metrics* metrics, const char* field, double* values,
                                            size_t capacity, size_t* size, int* present);

/* JSON rendering (caller frees with bhsm_string_free). */
BHSM_API bhsm_status bhsm_metrics_to_json(const bhsm_metrics* metrics, char** out);
BHSM_API bhsm_status bhsm_metrics_write_json(const bhsm_metrics* metrics, const char* path);

/* --------------------------------------------------------------------------
 * Verification
 * ------------------------------------------------------------------------ */

/* Runs the assumption checks for the controller parameters in a config file
 * ([hong] section or a full scenario). */
BHSM_API bhsm_status bhsm_verify_file(const char* path, uint64_t samples, uint64_t seed,
                                      bhsm_verify_report** out);
BHSM_API void bhsm_verify_report_free(bhsm_verify_report* report);
BHSM_API int bhsm_verify_report_passed(const bhsm_verify_report* report);
BHSM_API bhsm_status bhsm_verify_report_to_json(const bhsm_verify_report* report, char** out);

#ifdef __cplusplus
}
#endif

#endif /* BHSM_H */
