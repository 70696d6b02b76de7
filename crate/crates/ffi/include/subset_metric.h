#ifndef SUBSET_METRIC_H
#define SUBSET_METRIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which set distance to compute.
 */
typedef enum SmMetric {
  SM_METRIC_SUBSET = 0,
  SM_METRIC_HAUSDORFF = 1,
  SM_METRIC_SUM_MIN = 2,
  SM_METRIC_SURJECTIVE = 3,
  SM_METRIC_FAIR_SURJECTIVE = 4,
  SM_METRIC_LINK = 5,
} SmMetric;

/**
 * Result of every fallible call.
 */
typedef enum SmStatus {
  SM_STATUS_OK = 0,
  SM_STATUS_NULL_POINTER = 1,
  SM_STATUS_INVALID_UTF8 = 2,
  SM_STATUS_PARSE = 3,
  SM_STATUS_VALIDATION = 4,
  SM_STATUS_DOMAIN = 5,
  SM_STATUS_SIZE = 6,
  SM_STATUS_UNKNOWN_SET = 7,
  SM_STATUS_USAGE = 8,
  SM_STATUS_CONDITION2 = 9,
  SM_STATUS_BUFFER_TOO_SMALL = 10,
  SM_STATUS_PANIC = 11,
} SmStatus;

/**
 * Opaque workspace handle.
 */
typedef struct SmWorkspace SmWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sm_last_error(void);

/**
 * Parses a workspace from JSON or from the plain-text sequence form.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SmStatus sm_workspace_parse(const char *text, struct SmWorkspace **out);

/**
 * Releases a workspace. Passing null is a no-op.
 *
 * # Safety
 * `ws` must come from [`sm_workspace_parse`] and not have been freed.
 */
void sm_workspace_free(struct SmWorkspace *ws);

/**
 * Replaces the workspace's M function: `constant:<v>`, `diameter` or
 * `eccentricity`.
 *
 * # Safety
 * `ws` must be a live handle and `spec` a NUL-terminated string.
 */
enum SmStatus sm_workspace_set_m(struct SmWorkspace *ws, const char *spec);

/**
 * Number of named sets.
 *
 * # Safety
 * `ws` must be a live handle and `out` a valid pointer.
 */
enum SmStatus sm_workspace_set_count(const struct SmWorkspace *ws, size_t *out);

/**
 * Name of the set at `index` (file order). Release with [`sm_string_free`].
 *
 * # Safety
 * `ws` must be a live handle and `out` a valid pointer.
 */
enum SmStatus sm_workspace_set_name(const struct SmWorkspace *ws, size_t index, char **out);

/**
 * The workspace serialized to JSON. Release with [`sm_string_free`].
 *
 * # Safety
 * `ws` must be a live handle and `out` a valid pointer.
 */
enum SmStatus sm_workspace_to_json(const struct SmWorkspace *ws, char **out);

/**
 * Releases a string returned by this library. Passing null is a no-op.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sm_string_free(char *s);

/**
 * Distance between two named sets.
 *
 * # Safety
 * `ws` must be a live handle, the names NUL-terminated strings and `out` a
 * valid pointer.
 */
enum SmStatus sm_distance(const struct SmWorkspace *ws,
                          const char *set_a,
                          const char *set_b,
                          enum SmMetric metric,
                          double *out);

/**
 * Subset distance by exhaustive enumeration of injections (sets of at most 7
 * elements).
 *
 * # Safety
 * As for [`sm_distance`].
 */
enum SmStatus sm_distance_oracle(const struct SmWorkspace *ws,
                                 const char *set_a,
                                 const char *set_b,
                                 double *out);

/**
 * All-pairs distances, row-major, into `out[0 .. n*n]` where `n` is the set
 * count. `len` is the capacity of `out`.
 *
 * # Safety
 * `ws` must be a live handle and `out` valid for `len` writes.
 */
enum SmStatus sm_matrix(const struct SmWorkspace *ws,
                        enum SmMetric metric,
                        double *out,
                        size_t len);

/**
 * Runs the boundary-weight condition and metric-axiom checks; `*passed` is 1 when all pass.
 *
 * # Safety
 * `ws` must be a live handle and `passed` a valid pointer.
 */
enum SmStatus sm_validate(const struct SmWorkspace *ws, size_t samples, uint64_t seed, int *passed);

/**
 * Minimum-cost assignment on an `n x n` row-major cost matrix. Row `i` is
 * assigned to column `permutation[i]`.
 *
 * # Safety
 * `costs` must be valid for `n*n` reads and `permutation` for `n` writes.
 */
enum SmStatus sm_solve_assignment(const double *costs,
                                  size_t n,
                                  size_t *permutation,
                                  double *total_cost);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBSET_METRIC_H */
