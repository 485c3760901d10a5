/* C interface to the llbm mixed-volume and deficit engine. */

#ifndef LLBM_H
#define LLBM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a C-ABI call.  `Ok` is zero; everything else is an error and
 * leaves the out-parameters untouched.
 */
typedef enum LlbmStatus {
  LlbmStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  LlbmStatus_NullPointer = 1,
  /**
   * An argument was structurally invalid (bad counts, non-finite data).
   */
  LlbmStatus_InvalidArgument = 2,
  /**
   * Vector or body dimensions disagree.
   */
  LlbmStatus_DimensionMismatch = 3,
  /**
   * The body is not full-dimensional where the operation needs it to be.
   */
  LlbmStatus_DegenerateBody = 4,
  /**
   * The segment is not a structural summand of the body.
   */
  LlbmStatus_NotASummand = 5,
  /**
   * The operation is not available for these inputs.
   */
  LlbmStatus_Unsupported = 6,
  /**
   * An internal cross-check or computation failed.
   */
  LlbmStatus_Internal = 7,
} LlbmStatus;

/**
 * Opaque handle to a test function (a difference of support functions).
 */
typedef struct LlbmTestFunction LlbmTestFunction;

/**
 * Opaque handle to an origin-symmetric zonotope.
 */
typedef struct LlbmZonotope LlbmZonotope;

/**
 * The deficit quadratic form, split into its three terms:
 * `deficit = term_sq - term_bilinear - term_ratio`.
 */
typedef struct LlbmDeficit {
  /**
   * `V(K[n-1], f)^2 / vol(K)`.
   */
  double term_sq;
  /**
   * `(n-1)/n * V(K[n-2], f, f)`.
   */
  double term_bilinear;
  /**
   * `1/n * V(K[n-1], f^2 / h_K)`.
   */
  double term_ratio;
  /**
   * The difference; nonnegative for even test functions.
   */
  double deficit;
} LlbmDeficit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or an empty
 * string when nothing failed yet.  Valid until the next failing call on
 * the same thread; do not free it.
 */
const char *llbm_last_error_message(void);

/**
 * Builds the zonotope with the given generators (a row-major
 * `count x dim` array).  `count` may be zero for the origin.  Returns null
 * on failure; see `llbm_last_error_message`.  Free the handle with
 * `llbm_zonotope_free`.
 */
struct LlbmZonotope *llbm_zonotope_new(size_t dim, const double *generators, size_t count);

/**
 * Releases a zonotope handle.  Null is a no-op.
 */
void llbm_zonotope_free(struct LlbmZonotope *z);

/**
 * Writes the ambient dimension of the body to `out`.
 */
enum LlbmStatus llbm_zonotope_dim(const struct LlbmZonotope *z, size_t *out);

/**
 * Writes the support function of the body at `direction` (a `dim`-vector)
 * to `out`.
 */
enum LlbmStatus llbm_zonotope_support(const struct LlbmZonotope *z,
                                      const double *direction,
                                      size_t dim,
                                      double *out);

/**
 * Writes the volume of the body to `out`.
 */
enum LlbmStatus llbm_zonotope_volume(const struct LlbmZonotope *z, double *out);

/**
 * Writes the mixed volume of `groups` bodies with multiplicities to `out`.
 * `bodies` and `multiplicities` are parallel arrays of length `groups`;
 * the multiplicities must sum to the common dimension.
 */
enum LlbmStatus llbm_mixed_volume(const struct LlbmZonotope *const *bodies,
                                  const size_t *multiplicities,
                                  size_t groups,
                                  double *out);

/**
 * Builds the test function `h_P - h_M` from two bodies of equal dimension.
 * Returns null on failure.  Free with `llbm_function_free`.
 */
struct LlbmTestFunction *llbm_function_support_diff(const struct LlbmZonotope *plus,
                                                    const struct LlbmZonotope *minus);

/**
 * Releases a test-function handle.  Null is a no-op.
 */
void llbm_function_free(struct LlbmTestFunction *f);

/**
 * Writes the value of the test function at `direction` to `out`.
 */
enum LlbmStatus llbm_function_eval(const struct LlbmTestFunction *f,
                                   const double *direction,
                                   size_t dim,
                                   double *out);

/**
 * Evaluates the deficit quadratic form of a full-dimensional zonotope at
 * an even test function and writes all four numbers to `out`.
 */
enum LlbmStatus llbm_deficit(const struct LlbmZonotope *z,
                             const struct LlbmTestFunction *f,
                             struct LlbmDeficit *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LLBM_H */
