#ifndef NORMALITY_LAB_H
#define NORMALITY_LAB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum NlStatus {
  NL_OK = 0,
  NL_ERR_NULL = 1,
  NL_ERR_PARSE = 2,
  NL_ERR_VALIDATION = 3,
  NL_ERR_PRECISION = 4,
  NL_ERR_BUDGET = 5,
  NL_ERR_INVALID_ARG = 6,
  NL_ERR_PANIC = 7,
} NlStatus;

typedef enum NlVerdict {
  NL_MATCHES_OBSTRUCTION_FORM = 0,
  NL_FAILS_ITEM1 = 1,
  NL_FAILS_ITEM2 = 2,
} NlVerdict;

/**
 * Opaque validated system.
 */
typedef struct NlSystem NlSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *nl_last_error(void);

/**
 * Library version as a static string.
 */
const char *nl_version(void);

/**
 * Parses and validates a system from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NlStatus nl_system_from_json(const char *json, struct NlSystem **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `system` must come from `nl_system_from_json` and not be freed twice.
 */
void nl_system_free(struct NlSystem *system);

/**
 * Number of maps.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NlStatus nl_system_len(const struct NlSystem *system, size_t *out);

/**
 * Obstruction verdict for base `base`. `witness` receives the 1-based index
 * of a map whose slope is not log-commensurable with `base`, or 0 if none.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NlStatus nl_classify(const struct NlSystem *system,
                          uint64_t base,
                          enum NlVerdict *verdict,
                          size_t *witness);

/**
 * `F_q` of the self-similar measure; `q` is a rational string such as `"-5/7"`.
 *
 * # Safety
 * Pointers must be valid; `q` NUL-terminated.
 */
enum NlStatus nl_fourier_exact(const struct NlSystem *system,
                               const char *q,
                               double tol,
                               uint64_t budget,
                               double *re,
                               double *im,
                               double *error);

/**
 * First `n` certified base-`base` digits of the point sampled on PRNG
 * stream `task` of `seed`, written to `out[0..n]`.
 *
 * # Safety
 * `out` must hold `n` values.
 */
enum NlStatus nl_digits(const struct NlSystem *system,
                        uint64_t seed,
                        uint64_t task,
                        uint32_t base,
                        size_t n,
                        uint32_t *out);

/**
 * `T_b^k(x)` for `k = 0 … n-1` at the sampled point, with error bounds.
 *
 * # Safety
 * `values` and `errors` must each hold `n` values.
 */
enum NlStatus nl_orbit(const struct NlSystem *system,
                       uint64_t seed,
                       uint64_t task,
                       uint32_t base,
                       size_t n,
                       double *values,
                       double *errors);

/**
 * Gap between empirical and cylinder modes at each `ns[i]`, written to `gaps[i]`.
 *
 * # Safety
 * `ns` and `gaps` must each hold `len` values.
 */
enum NlStatus nl_martingale_gap(const struct NlSystem *system,
                                uint64_t seed,
                                int64_t q,
                                uint64_t p,
                                const size_t *ns,
                                size_t len,
                                double tol,
                                uint64_t budget,
                                double *gaps);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NORMALITY_LAB_H */
