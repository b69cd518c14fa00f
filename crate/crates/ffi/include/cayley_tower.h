#ifndef CAYLEY_TOWER_H
#define CAYLEY_TOWER_H

/* Generated by cbindgen from cayley-tower-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit contract.
 */
typedef enum {
  CT_STATUS_OK = 0,
  /**
   * A requested identity check failed.
   */
  CT_STATUS_CHECK_FAILED = 1,
  /**
   * Malformed descriptor, configuration or argument.
   */
  CT_STATUS_CONFIG_ERROR = 2,
  /**
   * Refused input outside the supported domain (e.g. ramified prime).
   */
  CT_STATUS_UNSUPPORTED = 3,
  /**
   * Library bug or caught panic.
   */
  CT_STATUS_INTERNAL = 4,
  /**
   * A required pointer argument was NULL.
   */
  CT_STATUS_NULL_POINTER = 5,
} CtStatus;

/**
 * Opaque group handle.
 */
typedef struct CtGroup CtGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread. The pointer is
 * valid until the next failing call on the same thread; never free it.
 */
const char *ct_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a `ct_*` function and not freed already.
 */
void ct_string_free(char *s);

/**
 * Builds a group from a descriptor such as "cyclic:5", "heisenberg:3",
 * "gl2:4" or "product(cyclic:3,symmetric:3)".
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string and `out` a valid pointer.
 */
CtStatus ct_group_new(const char *descriptor, CtGroup **out);

/**
 * # Safety
 * `group` must come from `ct_group_new` and not be freed twice.
 */
void ct_group_free(CtGroup *group);

/**
 * # Safety
 * `group` must be a live handle from `ct_group_new`.
 */
uintptr_t ct_group_order(const CtGroup *group);

/**
 * # Safety
 * `group` must be a live handle from `ct_group_new`.
 */
uint64_t ct_group_exponent(const CtGroup *group);

/**
 * # Safety
 * `group` must be a live handle from `ct_group_new`.
 */
uintptr_t ct_group_class_count(const CtGroup *group);

/**
 * Exact character table as JSON.
 *
 * # Safety
 * `group` must be NUL-terminated; `out_json` must be a valid pointer.
 */
CtStatus ct_chartab_json(const char *group, char **out_json);

/**
 * Full tower report as JSON. The configuration uses the same key = value
 * format as the CLI: group, gens, beta, ell, levels, precision, checks.
 *
 * # Safety
 * `config_text` must be NUL-terminated; `out_json` must be a valid pointer.
 */
CtStatus ct_tower_report_json(const char *config_text, char **out_json);

/**
 * Runs the checks selected in the configuration and maps the verify exit
 * contract onto the returned status: Ok, CheckFailed or Unsupported.
 *
 * # Safety
 * `config_text` must be a NUL-terminated string.
 */
CtStatus ct_verify(const char *config_text);

/**
 * Runs a whole manifest (blank-line-separated key = value blocks) and
 * returns the CSV summary.
 *
 * # Safety
 * `manifest_text` must be NUL-terminated; `out_csv` must be valid.
 */
CtStatus ct_batch_csv(const char *manifest_text, char **out_csv);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CAYLEY_TOWER_H */
