#ifndef WCFPP_H
#define WCFPP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Method behind an estimate.
 */
typedef enum WcfppMethod {
  WCFPP_METHOD_EXTREME_POINTS = 0,
  WCFPP_METHOD_LINEAR_PROGRAMS = 1,
  WCFPP_METHOD_SAMPLED = 2,
  WCFPP_METHOD_ANALYTIC = 3,
} WcfppMethod;

typedef enum WcfppStatus {
  WCFPP_STATUS_OK = 0,
  WCFPP_STATUS_NULL_POINTER = 1,
  WCFPP_STATUS_INVALID_ARGUMENT = 2,
  WCFPP_STATUS_INVALID_VECTOR = 3,
  WCFPP_STATUS_NOT_POLYHEDRAL = 4,
  WCFPP_STATUS_DIMENSION_CAP = 5,
  WCFPP_STATUS_INFEASIBLE = 6,
  WCFPP_STATUS_UNBOUNDED = 7,
  WCFPP_STATUS_TRUNCATION_OVERFLOW = 8,
  WCFPP_STATUS_BUFFER_TOO_SMALL = 9,
  WCFPP_STATUS_NUMERICAL = 10,
  WCFPP_STATUS_PANIC = 11,
} WcfppStatus;

/**
 * A column-stochastic affine map on the coefficient simplex.
 */
typedef struct WcfppMap WcfppMap;

/**
 * A basic sequence at a fixed truncation.
 */
typedef struct WcfppSequence WcfppSequence;

/**
 * A norm on coefficient vectors.
 */
typedef struct WcfppSpace WcfppSpace;

/**
 * Two-sided bound on a constant. `upper` may be `INFINITY`.
 */
typedef struct WcfppEstimate {
  double lower;
  double upper;
  bool certified;
  enum WcfppMethod method;
} WcfppEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *wcfpp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *wcfpp_version(void);

/**
 * Parses a space name (`c0`, `ell1`, `ell-p:2`, `summing`, `lin-ell1`,
 * `james:2`) or a JSON descriptor.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WcfppStatus wcfpp_space_parse(const char *name, struct WcfppSpace **out);

/**
 * # Safety
 * `space` must come from [`wcfpp_space_parse`] and not be freed twice.
 */
void wcfpp_space_free(struct WcfppSpace *space);

/**
 * `out = ||x||`.
 *
 * # Safety
 * `x` must point to `len` doubles; `out` must be valid.
 */
enum WcfppStatus wcfpp_norm(const struct WcfppSpace *space,
                            const double *x,
                            size_t len,
                            double *out);

/**
 * A sequence `canonical`, `summing`, `shifted:<p>`, `convex[:<base>]` (or
 * JSON) in `ambient`, truncated at `n`. `ambient` may be null for
 * `summing`, which then lives in c0.
 *
 * # Safety
 * Pointers must be valid; `preset` NUL-terminated.
 */
enum WcfppStatus wcfpp_sequence_new(const struct WcfppSpace *ambient,
                                    const char *preset,
                                    size_t n,
                                    struct WcfppSequence **out);

/**
 * # Safety
 * `seq` must come from [`wcfpp_sequence_new`] and not be freed twice.
 */
void wcfpp_sequence_free(struct WcfppSequence *seq);

/**
 * Basis constant `max_{k<=n} ||P_k||`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WcfppStatus wcfpp_basis_constant(const struct WcfppSequence *seq,
                                      size_t n,
                                      struct WcfppEstimate *out);

/**
 * Builds `f`/`f-main`, `f0`, `f1` or `f2` on a domain of `n` columns.
 * The main map needs `alpha_len >= 1` schedule values; the others ignore
 * `alphas`.
 *
 * # Safety
 * `kind` NUL-terminated; `alphas` points to `alpha_len` doubles.
 */
enum WcfppStatus wcfpp_map_build(const char *kind,
                                 size_t n,
                                 const double *alphas,
                                 size_t alpha_len,
                                 struct WcfppMap **out);

/**
 * # Safety
 * `map` must come from [`wcfpp_map_build`] and not be freed twice.
 */
void wcfpp_map_free(struct WcfppMap *map);

/**
 * Applies the map to the simplex point `t`. The image is written to
 * `out[..*out_len]`; `BufferTooSmall` reports the needed length in
 * `*out_len`.
 *
 * # Safety
 * `t` points to `len` doubles, `out` to `out_cap` doubles, `out_len` valid.
 */
enum WcfppStatus wcfpp_map_apply(const struct WcfppMap *map,
                                 const double *t,
                                 size_t len,
                                 double *out,
                                 size_t out_cap,
                                 size_t *out_len);

/**
 * Minimum of `||(A - I) t||` over the simplex of support `n`. When
 * `argmin` is not null it receives `n` doubles.
 *
 * # Safety
 * Pointers must be valid; `argmin` null or room for `n` doubles.
 */
enum WcfppStatus wcfpp_min_displacement(const struct WcfppMap *map,
                                        const struct WcfppSpace *space,
                                        size_t n,
                                        double *value,
                                        double *argmin);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WCFPP_H */
