/* C interface for the swemb library: sliced Wasserstein distances, the kappa constant, and quotient metrics for finite isometry groups. */

#ifndef SWEMB_H
#define SWEMB_H

/* Generated by cbindgen from swemb-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes for every fallible call in this interface.
 */
typedef enum SwembStatus {
  SWEMB_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  SWEMB_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input: bad sizes, non-finite values, invalid configuration.
   */
  SWEMB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Inputs are individually valid but incompatible with each other.
   */
  SWEMB_STATUS_MISMATCH = 3,
  /**
   * A numeric routine failed (e.g. a kernel was not embeddable).
   */
  SWEMB_STATUS_NUMERIC_ERROR = 4,
  /**
   * Unexpected internal failure.
   */
  SWEMB_STATUS_INTERNAL = 5,
} SwembStatus;

/**
 * Opaque finite group of affine isometries of R^n.
 */
typedef struct SwembGroup SwembGroup;

/**
 * Opaque empirical measure: k uniformly weighted points in R^n.
 */
typedef struct SwembMeasure SwembMeasure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure in this thread. The pointer
 * stays valid until the next failing call from the same thread.
 */
const char *swemb_last_error_message(void);

/**
 * Creates a measure from `k` points of dimension `n`, stored row-major in
 * `points` (`k * n` doubles).
 *
 * # Safety
 * `points` must be readable for `k * n` doubles and `out` must be a valid
 * destination for one pointer. A non-NULL result handle must be released
 * with [`swemb_measure_free`].
 */
enum SwembStatus swemb_measure_new(const double *points,
                                   size_t k,
                                   size_t n,
                                   struct SwembMeasure **out);

/**
 * Releases a measure handle; NULL is ignored.
 *
 * # Safety
 * `measure` must be NULL or a handle from [`swemb_measure_new`] that has
 * not been freed yet.
 */
void swemb_measure_free(struct SwembMeasure *measure);

/**
 * Number of support points, or 0 for NULL.
 *
 * # Safety
 * `measure` must be NULL or a live handle.
 */
size_t swemb_measure_size(const struct SwembMeasure *measure);

/**
 * Ambient dimension, or 0 for NULL.
 *
 * # Safety
 * `measure` must be NULL or a live handle.
 */
size_t swemb_measure_dim(const struct SwembMeasure *measure);

/**
 * Exact 1-Wasserstein distance between two equal-size measures.
 *
 * # Safety
 * Handles must be live; `out_distance` must point to one double.
 */
enum SwembStatus swemb_w1(const struct SwembMeasure *alpha,
                          const struct SwembMeasure *beta,
                          double *out_distance);

/**
 * Exact 1-Wasserstein distance plus one optimal matching, written as k
 * indices into beta.
 *
 * # Safety
 * `out_permutation` must be writable for `swemb_measure_size(alpha)`
 * entries; other arguments as in [`swemb_w1`].
 */
enum SwembStatus swemb_w1_matching(const struct SwembMeasure *alpha,
                                   const struct SwembMeasure *beta,
                                   size_t *out_permutation,
                                   double *out_distance);

/**
 * Seeded Monte-Carlo estimate of the unnormalized sliced 1-Wasserstein
 * distance; identical inputs give identical results on any thread count.
 *
 * # Safety
 * Handles must be live; out-pointers must each point to one double
 * (`out_std_error` may be NULL when the error bar is not wanted).
 */
enum SwembStatus swemb_sw1_monte_carlo(const struct SwembMeasure *alpha,
                                       const struct SwembMeasure *beta,
                                       uint64_t num_samples,
                                       uint64_t seed,
                                       double *out_value,
                                       double *out_std_error);

/**
 * Exact sliced 1-Wasserstein distance in the plane (n = 2).
 *
 * # Safety
 * Handles must be live; `out_value` must point to one double.
 */
enum SwembStatus swemb_sw1_exact_2d(const struct SwembMeasure *alpha,
                                    const struct SwembMeasure *beta,
                                    double *out_value);

/**
 * kappa(n): the integral of |x_1| over the unit sphere in R^n.
 *
 * # Safety
 * `out` must point to one double.
 */
enum SwembStatus swemb_kappa(size_t n, double *out);

/**
 * Surface area of the unit (n-1)-sphere.
 *
 * # Safety
 * `out` must point to one double.
 */
enum SwembStatus swemb_sphere_area(size_t n, double *out);

/**
 * Expected |x_1| under the uniform sphere distribution (n >= 3).
 *
 * # Safety
 * `out` must point to one double.
 */
enum SwembStatus swemb_cap_expectation(size_t n, double *out);

/**
 * Builds a finite isometry group from `count` elements acting on R^n.
 * Rotations are passed row-major, `count * n * n` doubles; translations
 * are `count * n` doubles. The element list must contain the identity and
 * be closed under composition and inverse.
 *
 * # Safety
 * The buffers must be readable for the stated lengths; `out` must be a
 * valid destination for one pointer. A non-NULL result handle must be
 * released with [`swemb_group_free`].
 */
enum SwembStatus swemb_group_new(const double *rotations,
                                 const double *translations,
                                 size_t count,
                                 size_t n,
                                 struct SwembGroup **out);

/**
 * Releases a group handle; NULL is ignored.
 *
 * # Safety
 * `group` must be NULL or a handle from [`swemb_group_new`] that has not
 * been freed yet.
 */
void swemb_group_free(struct SwembGroup *group);

/**
 * Group order, or 0 for NULL.
 *
 * # Safety
 * `group` must be NULL or a live handle.
 */
size_t swemb_group_order(const struct SwembGroup *group);

/**
 * Quotient distance min over g of |x - g y| for two points of R^n.
 *
 * # Safety
 * `group` must be live; `x` and `y` must be readable for n doubles where n
 * is the group's dimension; `out_distance` must point to one double.
 */
enum SwembStatus swemb_quotient_distance(const struct SwembGroup *group,
                                         const double *x,
                                         const double *y,
                                         double *out_distance);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWEMB_H */
