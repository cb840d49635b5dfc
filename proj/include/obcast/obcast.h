#ifndef OBCAST_OBCAST_H
#define OBCAST_OBCAST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OBCAST_API __declspec(dllexport)
#else
#define OBCAST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum obcast_status {
  OBCAST_OK = 0,
  OBCAST_ERR_INVALID_INPUT = 1,
  OBCAST_ERR_UNKNOWN_NAME = 2,
  OBCAST_ERR_UNSUPPORTED_SIZE = 3,
  OBCAST_ERR_PRECONDITION = 4,
  OBCAST_ERR_DOES_NOT_FIT_FORM = 5,
  OBCAST_ERR_SOLVER_FAILURE = 6,
  OBCAST_ERR_IO = 7,
  OBCAST_ERR_INTERNAL = 8,
  OBCAST_ERR_NULL_ARGUMENT = 9
} obcast_status;

/* TEXT: one aligned line per report with value, certificate and verdict. */
typedef enum obcast_format { OBCAST_FORMAT_JSON = 0, OBCAST_FORMAT_CSV = 1, OBCAST_FORMAT_TEXT = 2 } obcast_format;

/* Solver tolerances; obcast_options_default fills the library defaults. */
typedef struct obcast_options {
  double tol_primal;
  double tol_gap;
  double tol_eig;
  uint64_t seed;
  size_t trials; /* 0 selects each suite's default */
  size_t jobs;
} obcast_options;

typedef struct obcast_object obcast_object;     /* gallery or file object: ensemble, POVM or isometry */
typedef struct obcast_reports obcast_reports;   /* ordered list of bound reports */
typedef struct obcast_moe_game obcast_moe_game; /* monogamy game */

OBCAST_API void obcast_options_default(obcast_options* out);

/* Message of the last failure on the calling thread; empty after success. Valid until the next call. */
OBCAST_API const char* obcast_last_error(void);
OBCAST_API const char* obcast_status_name(obcast_status status);

/* Strings returned through char** are owned by the caller and released with obcast_string_free. */
OBCAST_API void obcast_string_free(char* s);

/* Newline-separated names. */
OBCAST_API obcast_status obcast_gallery_names(char** out);
OBCAST_API obcast_status obcast_object_from_gallery(const char* name, obcast_object** out);
OBCAST_API obcast_status obcast_object_from_json(const char* text, obcast_object** out);
OBCAST_API obcast_status obcast_object_to_json(const obcast_object* obj, char** out);
OBCAST_API obcast_status obcast_object_kind(const obcast_object* obj, char** out);
OBCAST_API void obcast_object_free(obcast_object* obj);

/* method: postinfo, thm4, prop4, disk or moe. */
OBCAST_API obcast_status obcast_bound(const obcast_object* obj, const char* method, const obcast_options* options,
                                      obcast_reports** out);
/* Validation summary as JSON: orthogonality, form detection, kill patterns and broadcast feasibility. */
OBCAST_API obcast_status obcast_check(const obcast_object* obj, const obcast_options* options, char** out);

/* only: comma-separated id prefixes, NULL or empty for every case. */
OBCAST_API obcast_status obcast_reproduce(const obcast_options* options, const char* only, obcast_reports** out);
/* Newline-separated suite names. */
OBCAST_API obcast_status obcast_property_names(char** out);
/* name NULL runs every suite. */
OBCAST_API obcast_status obcast_property_run(const char* name, const obcast_options* options, obcast_reports** out);

OBCAST_API obcast_status obcast_moe_game_builtin(const char* name, obcast_moe_game** out); /* go or bb84 */
OBCAST_API obcast_status obcast_moe_game_from_json(const char* text, obcast_moe_game** out);
OBCAST_API obcast_status obcast_moe_game_to_json(const obcast_moe_game* game, char** out);
OBCAST_API obcast_status obcast_moe_analyze(const obcast_moe_game* game, obcast_reports** out);
OBCAST_API void obcast_moe_game_free(obcast_moe_game* game);

OBCAST_API size_t obcast_reports_count(const obcast_reports* reports);
/* Nonzero when every non-heuristic report passes. */
OBCAST_API int obcast_reports_passed(const obcast_reports* reports);
/* Report at index: id, computed value, pass flag. Pointers stay valid while the list lives. */
OBCAST_API obcast_status obcast_reports_get(const obcast_reports* reports, size_t index, const char** id,
                                            double* computed, int* pass);
OBCAST_API obcast_status obcast_reports_render(const obcast_reports* reports, obcast_format format, char** out);
OBCAST_API void obcast_reports_free(obcast_reports* reports);

#ifdef __cplusplus
}
#endif

#endif
