#ifndef CCVA_H
#define CCVA_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CCVA_API __declspec(dllexport)
#else
#define CCVA_API __attribute__((visibility("default")))
#endif

/* Status codes returned by every fallible call. */
enum ccva_status {
    CCVA_OK = 0,
    CCVA_CONFIG_ERROR = 1,   /* invalid scenario, flag or argument */
    CCVA_RUNTIME_ERROR = 2,  /* I/O or numerical failure */
};

typedef struct ccva_scenario ccva_scenario;
typedef struct ccva_result ccva_result;

typedef struct ccva_components {
    double cva;
    double dva;
    double mva;
    double mla;
    double kva;
    double total; /* cva + mva + mla + kva */
} ccva_components;

typedef struct ccva_diagnostics {
    long liquidations;
    long uncovered;
    double max_conservation_error;
    double max_clearing_error;
} ccva_diagnostics;

/* Message of the last failed call on this thread; never NULL. */
CCVA_API const char* ccva_last_error(void);

CCVA_API int ccva_scenario_default(ccva_scenario** out);
CCVA_API int ccva_scenario_load(const char* path, ccva_scenario** out);
CCVA_API int ccva_scenario_parse(const char* json_text, ccva_scenario** out);
CCVA_API void ccva_scenario_free(ccva_scenario* s);
CCVA_API int ccva_scenario_validate(const ccva_scenario* s);
CCVA_API int ccva_scenario_to_json(const ccva_scenario* s, char** out);

/* setup is "ccp" or "csa" */
CCVA_API int ccva_scenario_set_setup(ccva_scenario* s, const char* setup);
CCVA_API int ccva_scenario_set_reference(ccva_scenario* s, int index);
CCVA_API int ccva_scenario_set_paths(ccva_scenario* s, long paths);
CCVA_API int ccva_scenario_set_seed(ccva_scenario* s, uint64_t seed);
CCVA_API int ccva_scenario_set_workers(ccva_scenario* s, int workers);
/* liquidation period (days) and IM quantile of the given setup's margin config */
CCVA_API int ccva_scenario_set_margin(ccva_scenario* s, const char* setup, double delta_days, double quantile);

/* Runs the estimator of the scenario's setup. Values in basis points. */
CCVA_API int ccva_run(const ccva_scenario* s, ccva_result** out);
CCVA_API int ccva_result_values(const ccva_result* r, ccva_components* value, ccva_components* se);
CCVA_API int ccva_result_diagnostics(const ccva_result* r, ccva_diagnostics* d);
CCVA_API double ccva_result_nu0(const ccva_result* r);
CCVA_API int ccva_result_csv(const ccva_result* r, char** out);
CCVA_API void ccva_result_free(ccva_result* r);

/* table_id: "t0", "t0bis", "days" or "quantiles" */
CCVA_API int ccva_table_csv(const ccva_scenario* s, const char* table_id, char** out);
CCVA_API int ccva_sweep_csv(const ccva_scenario* s, double a_min, double a_max, int steps, char** out);

CCVA_API void ccva_string_free(char* p);

#ifdef __cplusplus
}
#endif

#endif
