#ifndef STUBLAB_H
#define STUBLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum StublabStatus {
  /**
   * The call succeeded and every checked property holds (possibly within bounds).
   */
  STUBLAB_STATUS_OK = 0,
  /**
   * The call succeeded and a checked property fails; the report carries the witness.
   */
  STUBLAB_STATUS_FAILS = 1,
  /**
   * Malformed JSON, unknown names or ids, or otherwise invalid input.
   */
  STUBLAB_STATUS_INVALID_INPUT = 2,
  /**
   * A state, closure or enumeration cap was hit before an answer was reached.
   */
  STUBLAB_STATUS_LIMIT_EXCEEDED = 3,
  /**
   * A required pointer argument was null.
   */
  STUBLAB_STATUS_NULL_POINTER = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  STUBLAB_STATUS_INVALID_UTF8 = 5,
  /**
   * The library panicked; the handle arguments should be considered unusable.
   */
  STUBLAB_STATUS_INTERNAL = 6,
} StublabStatus;

/**
 * Opaque LSTS handle.
 */
typedef struct StublabLsts StublabLsts;

/**
 * Opaque Petri net handle.
 */
typedef struct StublabNet StublabNet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the message of the last failed call on this thread, or null.
 * The pointer stays valid until the next `stublab_*` call on the thread.
 */
const char *stublab_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library that has not
 * been freed yet.
 */
void stublab_string_free(char *s);

/**
 * Parses an LSTS from its JSON form.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be a valid pointer.
 */
enum StublabStatus stublab_lsts_from_json(const char *json, struct StublabLsts **out);

/**
 * Releases an LSTS handle. Null is ignored.
 *
 * # Safety
 * `lsts` must be null or a live handle from this library.
 */
void stublab_lsts_free(struct StublabLsts *lsts);

/**
 * Serialises an LSTS to JSON.
 *
 * # Safety
 * `lsts` must be a live handle; `out` must be a valid pointer.
 */
enum StublabStatus stublab_lsts_to_json(const struct StublabLsts *lsts, char **out);

/**
 * Number of states of an LSTS, or 0 for a null handle.
 *
 * # Safety
 * `lsts` must be null or a live handle.
 */
size_t stublab_lsts_num_states(const struct StublabLsts *lsts);

/**
 * Number of transitions of an LSTS, or 0 for a null handle.
 *
 * # Safety
 * `lsts` must be null or a live handle.
 */
size_t stublab_lsts_num_transitions(const struct StublabLsts *lsts);

/**
 * Parses a Petri net from its JSON form.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be a valid pointer.
 */
enum StublabStatus stublab_net_from_json(const char *json, struct StublabNet **out);

/**
 * Releases a net handle. Null is ignored.
 *
 * # Safety
 * `net` must be null or a live handle from this library.
 */
void stublab_net_free(struct StublabNet *net);

/**
 * Builds the reachability LSTS of a net.
 *
 * `props_json` may be null for no propositions. `invisibility` is a
 * comma-joined flag list such as `"reach,value"`; null means `"plain"`.
 * A zero `state_cap` or `box_bound` selects 10000 and 6.
 *
 * # Safety
 * `net` must be a live handle, string arguments null or valid C strings,
 * `out` a valid pointer.
 */
enum StublabStatus stublab_net_build_lsts(const struct StublabNet *net,
                                          const char *props_json,
                                          const char *invisibility,
                                          size_t state_cap,
                                          uint32_t box_bound,
                                          struct StublabLsts **out);

/**
 * Checks one stubborn-set condition at one state.
 *
 * `rset_json` is a JSON array of action names, `condition` one of
 * `D0 D1 D1p D2 D2w V I C4`. A zero `bound` selects the default path bound.
 * The report has the shape of the `check` command's result entries.
 *
 * # Safety
 * `lsts` must be a live handle, string arguments valid C strings, `out` a
 * valid pointer.
 */
enum StublabStatus stublab_check_condition(const struct StublabLsts *lsts,
                                           size_t state,
                                           const char *rset_json,
                                           const char *condition,
                                           size_t bound,
                                           char **out);

/**
 * Builds the reduced LSTS of `lsts` under a reduction function given in
 * its JSON form.
 *
 * # Safety
 * `lsts` must be a live handle, `r_json` a valid C string, `out` a valid
 * pointer.
 */
enum StublabStatus stublab_reduce(const struct StublabLsts *lsts,
                                  const char *r_json,
                                  struct StublabLsts **out);

/**
 * Compares a reduced LSTS with the full one. `mode` is one of `stutter`,
 * `weak`, `deadlock` or `labels`; zero limits select 2 and 100000. The
 * reduced LSTS must be a subgraph of the full one, as produced by
 * [`stublab_reduce`].
 *
 * # Safety
 * Both handles must be live, `mode` a valid C string, `out` a valid pointer.
 */
enum StublabStatus stublab_compare(const struct StublabLsts *full,
                                   const struct StublabLsts *reduced,
                                   const char *mode,
                                   size_t repeat,
                                   size_t count,
                                   char **out);

/**
 * Runs the bundled model suite. A nonzero `d1_for_d1p` replaces D1p by D1
 * wherever the suite checks D1p.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StublabStatus stublab_run_suite(bool d1_for_d1p, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STUBLAB_H */
