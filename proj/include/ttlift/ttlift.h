#ifndef TTLIFT_H
#define TTLIFT_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define TTL_API __declspec(dllexport)
#else
#define TTL_API __attribute__((visibility("default")))
#endif

typedef enum ttl_status {
    TTL_OK = 0,
    TTL_ERR_INVALID_ARG = 1,
    TTL_ERR_CONFIG = 2,
    TTL_ERR_MODEL = 3,
    TTL_ERR_TRUNCATION = 4,
    TTL_ERR_UNKNOWN_TARGET = 5,
    TTL_ERR_INTERNAL = 6
} ttl_status;

typedef struct ttl_context ttl_context;

/* Strings returned through char** out-parameters are owned by the caller
   and must be released with ttl_string_free. */

TTL_API const char* ttl_version(void);

/* Message of the last failure on the calling thread ("" if none). */
TTL_API const char* ttl_last_error(void);

TTL_API void ttl_string_free(char* s);

/* JSON array of {name, summary}. */
TTL_API ttl_status ttl_models_list(char** out_json);

/* Canonical JSON config of a built-in model. */
TTL_API ttl_status ttl_model_config_builtin(const char* name, char** out_json);

/* Builds a context. `model` is a JSON config text, a built-in name or a
   path; names are also looked up in $TTLIFT_MODEL_DIR. `overrides_json`
   may be NULL or an object with any of: n_max, d_max, i_max, tolerance,
   scalar_mode, seed, normalization. */
TTL_API ttl_status ttl_context_create(const char* model, const char* overrides_json, ttl_context** out);

TTL_API void ttl_context_free(ttl_context* ctx);

/* Effective config after overrides, as canonical JSON. */
TTL_API ttl_status ttl_context_config(const ttl_context* ctx, char** out_json);

/* Runs the comma-separated check groups (NULL or "all" for every group).
   report_json gets the full report, table a text rendering; either may be
   NULL. all_pass is 1 iff no asserted entry failed. */
TTL_API ttl_status ttl_verify(ttl_context* ctx, const char* checks_csv, char** report_json, char** table, int* all_pass);

/* Dumps a lifted object: u, M, t_frame, eta_hat, h_hat, higgs_hat,
   chern_hat, curvature_hat. */
TTL_API ttl_status ttl_lift(ttl_context* ctx, const char* target, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
