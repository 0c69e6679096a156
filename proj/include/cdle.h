#ifndef CDLE_H
#define CDLE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum cdle_status {
  CDLE_OK = 0,
  CDLE_TYPE_ERROR = 1,
  CDLE_PARSE_ERROR = 2, /* also unresolved modules and unreadable files */
  CDLE_FUEL_EXHAUSTED = 3,
  CDLE_INTERNAL = 4,
  CDLE_BAD_ARGUMENT = 5
} cdle_status;

typedef enum cdle_reduction {
  CDLE_WHNF = 0,
  CDLE_FULL = 1,
  CDLE_CBV = 2
} cdle_reduction;

typedef struct cdle_env cdle_env;

/* `roots` may be NULL when `n_roots` is 0. A fuel of 0 or a depth below 0
   selects the defaults (1,000,000 steps, depth 8). */
cdle_env* cdle_env_new(const char* const* roots, size_t n_roots, uint64_t fuel, int bohm_depth);
void cdle_env_free(cdle_env* env);

/* Diagnostics of the last failing call on `env`; empty after a success.
   The JSON form holds one record per line. Owned by `env`. */
const char* cdle_last_error(const cdle_env* env);
const char* cdle_last_error_json(const cdle_env* env);

cdle_status cdle_check_file(cdle_env* env, const char* file);
cdle_status cdle_load_module(cdle_env* env, const char* module_path);

/* Definitions are addressed as "module/path::name". Returned strings are
   released with cdle_string_free. */
cdle_status cdle_type_of(cdle_env* env, const char* def, char** out);
cdle_status cdle_erase(cdle_env* env, const char* def, char** out);
cdle_status cdle_normalize(cdle_env* env, const char* def, cdle_reduction mode, char** out, uint64_t* steps);
cdle_status cdle_steps(cdle_env* env, const char* def, cdle_reduction mode, uint64_t* steps);
cdle_status cdle_size(cdle_env* env, const char* def, uint64_t* size);

/* Checks every manifest entry; `report` receives a human-readable summary,
   or JSON lines when `json` is nonzero. */
cdle_status cdle_corpus(cdle_env* env, const char* manifest, int json, char** report);

void cdle_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
