/* C interface to the decisive model checker. All strings are UTF-8 and
 * NUL-terminated. Strings returned through char** out-parameters are owned by
 * the caller and released with decisive_string_free. */
#ifndef DECISIVE_DECISIVE_H
#define DECISIVE_DECISIVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DECISIVE_API __declspec(dllexport)
#else
#define DECISIVE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct decisive_model decisive_model;

/* Status codes. The values are stable. */
typedef enum decisive_status {
  DECISIVE_OK = 0,
  DECISIVE_ERR_SYNTAX = 1,
  DECISIVE_ERR_VALIDATION = 2,
  DECISIVE_ERR_INVALID_ARGUMENT = 3,
  DECISIVE_ERR_UNSUPPORTED = 4,
  DECISIVE_ERR_RESOURCE_EXHAUSTED = 5,
  DECISIVE_ERR_MALFORMED_STATE = 6,
  DECISIVE_ERR_IO = 7,
  DECISIVE_ERR_SINGULAR_SYSTEM = 8,
  DECISIVE_ERR_LIMIT_EXCEEDED = 9,
  DECISIVE_ERR_INTERNAL = 99
} decisive_status;

/* Parse flags. */
#define DECISIVE_PARSE_AUTO_SELFLOOP 1u
#define DECISIVE_PARSE_AUTO_TOTAL 2u

typedef enum decisive_query_kind {
  DECISIVE_QUERY_VALIDATE = 0,
  DECISIVE_QUERY_QUAL_REACH = 1,
  DECISIVE_QUERY_QUAL_REPEAT = 2,
  DECISIVE_QUERY_APPROX_REACH = 3,
  DECISIVE_QUERY_APPROX_REPEAT = 4,
  DECISIVE_QUERY_CERTIFY = 5,
  DECISIVE_QUERY_ORACLE = 6,
  DECISIVE_QUERY_SIMULATE = 7
} decisive_query_kind;

typedef enum decisive_side {
  DECISIVE_SIDE_NONE = -1,
  DECISIVE_SIDE_ONE = 0,
  DECISIVE_SIDE_ZERO = 1
} decisive_side;

typedef struct decisive_query {
  decisive_query_kind kind;
  decisive_side side;        /* qualitative queries only */
  const char* eps;           /* fraction such as "1/100"; NULL unless approximate */
  uint64_t budget;           /* state expansions */
  const char* const* targets; /* target clauses, e.g. "q s1"; overrides the model's */
  size_t num_targets;
  uint64_t seed;
  uint64_t bound;            /* oracle truncation bound */
  uint64_t gap_cap;          /* oracle: pntm gap cap */
  uint64_t state_limit;      /* oracle */
  uint64_t runs;             /* simulate */
  uint64_t horizon;          /* simulate */
} decisive_query;

/* Fills *query with the defaults (validate, no side, no eps, budget 10^6). */
DECISIVE_API void decisive_query_init(decisive_query* query);

DECISIVE_API decisive_status decisive_model_parse(const char* text, size_t length, unsigned flags,
                                                  decisive_model** out);
DECISIVE_API decisive_status decisive_model_load_file(const char* path, unsigned flags, decisive_model** out);
DECISIVE_API void decisive_model_free(decisive_model* model);

/* "pvass", "plcs" or "pntm"; the string is static. */
DECISIVE_API const char* decisive_model_kind(const decisive_model* model);

/* Canonical text form of the model. */
DECISIVE_API decisive_status decisive_model_print(const decisive_model* model, char** out);

/* Runs a query. On DECISIVE_OK, *report_json holds the JSON report and
 * *exit_code is 0 (decided or computed) or 2 (unknown or budget exhausted). */
DECISIVE_API decisive_status decisive_run(const decisive_model* model, const decisive_query* query,
                                          char** report_json, int* exit_code);

DECISIVE_API void decisive_string_free(char* s);

/* Message of the last failed call on this thread; empty if none. */
DECISIVE_API const char* decisive_last_error(void);

/* Stable name such as "SyntaxError" for a status code. */
DECISIVE_API const char* decisive_status_name(decisive_status status);

DECISIVE_API const char* decisive_version(void);

#ifdef __cplusplus
}
#endif

#endif /* DECISIVE_DECISIVE_H */
