#ifndef TBC_TBC_H
#define TBC_TBC_H

/* C interface to the transparent-boundary Schrodinger solver. All entry
 * points return a status code; on failure tbc_last_error() describes the
 * problem (thread-local). Strings returned through char** are heap-allocated
 * and must be released with tbc_string_free(). */

#ifdef __cplusplus
extern "C" {
#endif

enum {
    TBC_OK = 0,
    TBC_ERR_CONFIG = 2,   /* invalid configuration or arguments */
    TBC_ERR_OPERATOR = 3, /* operator file missing, corrupt, or mismatched */
    TBC_ERR_NUMERIC = 4   /* numerical failure (quadrature, solver breakdown) */
};

typedef struct tbc_config tbc_config;

const char* tbc_version(void);

/* Last error message for the calling thread; empty string if none. */
const char* tbc_last_error(void);

void tbc_string_free(char* s);

/* Configuration: flat `section.key = value` text. */
int tbc_config_parse_file(const char* path, tbc_config** out);
int tbc_config_parse_string(const char* text, tbc_config** out);
/* Canonical serialization; owned by the handle, valid until tbc_config_free. */
const char* tbc_config_canonical(const tbc_config* c);
void tbc_config_free(tbc_config* c);

/* Build and save the boundary operator; *report (optional) receives the
 * storage/rank summary. */
int tbc_precompute(const tbc_config* c, const char* out_path, char** report);

/* March the configured problem. ops_path/mode may be NULL to use the config.
 * *report (optional) receives the run summary. */
int tbc_run(const tbc_config* c, const char* ops_path, const char* mode, char** report);

/* Reference trajectory, kind "analytic" or "dirichlet"; L <= 0 uses the
 * config value. */
int tbc_reference(const tbc_config* c, const char* kind, double L, char** report);

/* Max-L2 comparison of two snapshot trajectories on [lo, hi] (lo >= hi means
 * the whole grid). curve_csv (optional) receives the per-time error curve;
 * max_l2 (optional) the scalar result. */
int tbc_compare(const char* path_a, const char* path_b, double lo, double hi,
                const char* curve_csv, double* max_l2, char** report);

/* Series comparison: paths[0..n-2] against the reference paths[n-1]. */
int tbc_compare_series(const char* const* paths, int n, double lo, double hi, char** report);

/* Timing benchmark over n_list; returns TBC_ERR_NUMERIC if the butterfly
 * growth-factor assertion fails. */
int tbc_bench(const tbc_config* c, const int* n_list, int n, char** report);

#ifdef __cplusplus
}
#endif

#endif
