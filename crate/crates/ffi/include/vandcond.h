#ifndef VANDCOND_H
#define VANDCOND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Staging of the quasi-cyclic lower bound.
 */
typedef enum {
  VC_QC_BASE = 0,
  VC_QC_EQ15 = 1,
  VC_QC_EQ16 = 2,
  VC_QC_PRODUCT = 3,
  VC_QC_INTEGRAL = 4,
} VcQcMode;

/**
 * Result codes. Zero is success.
 */
typedef enum {
  VC_OK = 0,
  VC_NULL_POINTER = 1,
  VC_INVALID_ARGUMENT = 2,
  VC_DUPLICATE_KNOT = 3,
  VC_KNOT_COLLISION = 4,
  VC_RANGE_OVERFLOW = 5,
  VC_CONVERGENCE_FAILURE = 6,
  VC_SHAPE = 7,
  VC_ZERO_PIVOT = 8,
  VC_NO_BOUND = 9,
  VC_IO = 10,
  VC_PANIC = 11,
} VcStatus;

/**
 * Which closed-form inverse entry formula to use.
 */
typedef enum {
  VC_COMPACT = 0,
  VC_CORRECTED = 1,
} VcVariant;

/**
 * Opaque knot vector.
 */
typedef struct VcKnots VcKnots;

/**
 * Opaque dense complex matrix.
 */
typedef struct VcMatrix VcMatrix;

/**
 * Condition number summary.
 */
typedef struct {
  double sigma1;
  double sigma_min;
  double kappa;
  double log10kappa;
  /**
   * Nonzero when kappa is small enough for double precision to resolve.
   */
  int32_t trustworthy;
} VcCondition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *vc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *vc_version(void);

/**
 * Builds a knot vector from `n` points given as separate real and imaginary
 * arrays. Fails on coinciding knots.
 *
 * # Safety
 * `re` and `im` must point to `n` readable doubles; `out` must be writable.
 */
VcStatus vc_knots_from_points(const double *re, const double *im, size_t n, VcKnots **out);

/**
 * The n-th roots of unity.
 *
 * # Safety
 * `out` must be writable.
 */
VcStatus vc_knots_roots_of_unity(size_t n, VcKnots **out);

/**
 * The first n points of the quasi-cyclic sequence.
 *
 * # Safety
 * `out` must be writable.
 */
VcStatus vc_knots_quasi_cyclic(size_t n, VcKnots **out);

/**
 * The first n points of the van der Corput sequence on the unit circle.
 *
 * # Safety
 * `out` must be writable.
 */
VcStatus vc_knots_van_der_corput(size_t n, VcKnots **out);

/**
 * `omega_n^i` for `i < n - 1`, then the given last knot.
 *
 * # Safety
 * `out` must be writable.
 */
VcStatus vc_knots_single_outlier(size_t n, double last_re, double last_im, VcKnots **out);

/**
 * The (n-k)-th roots of unity followed by k-th roots scaled by `rho`.
 *
 * # Safety
 * `out` must be writable.
 */
VcStatus vc_knots_scaled_cluster(size_t n, size_t k, double rho, VcKnots **out);

/**
 * Number of knots; zero for NULL.
 *
 * # Safety
 * `k` must be NULL or a live handle.
 */
size_t vc_knots_len(const VcKnots *k);

/**
 * Reads knot `i`.
 *
 * # Safety
 * `k` must be a live handle; `re` and `im` must be writable.
 */
VcStatus vc_knots_get(const VcKnots *k, size_t i, double *re, double *im);

/**
 * Releases a knot vector. NULL is ignored.
 *
 * # Safety
 * `k` must be NULL or a handle not yet freed.
 */
void vc_knots_free(VcKnots *k);

/**
 * The Vandermonde matrix `s_i^j`.
 *
 * # Safety
 * `k` must be a live handle; `out` must be writable.
 */
VcStatus vc_matrix_vandermonde(const VcKnots *k, VcMatrix **out);

/**
 * The n x n DFT matrix.
 *
 * # Safety
 * `out` must be writable.
 */
VcStatus vc_matrix_dft(size_t n, VcMatrix **out);

/**
 * The CV matrix `1/(s_i - f omega_n^j)`.
 *
 * # Safety
 * `k` must be a live handle; `out` must be writable.
 */
VcStatus vc_matrix_cv(const VcKnots *k, double f_re, double f_im, VcMatrix **out);

/**
 * The q x q top-left block of `m`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
VcStatus vc_matrix_leading_block(const VcMatrix *m, size_t q, VcMatrix **out);

/**
 * Inverse of the Vandermonde matrix of `k`, through the CV matrix with
 * parameter `f` when `use_cv` is nonzero, otherwise by Lagrange
 * interpolation.
 *
 * # Safety
 * `k` must be a live handle; `out` must be writable.
 */
VcStatus vc_matrix_vandermonde_inverse(const VcKnots *k,
                                       int32_t use_cv,
                                       double f_re,
                                       double f_im,
                                       VcVariant variant,
                                       VcMatrix **out);

/**
 * Row count; zero for NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t vc_matrix_rows(const VcMatrix *m);

/**
 * Column count; zero for NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t vc_matrix_cols(const VcMatrix *m);

/**
 * Reads entry `(i, j)`.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable.
 */
VcStatus vc_matrix_get(const VcMatrix *m, size_t i, size_t j, double *re, double *im);

/**
 * Releases a matrix. NULL is ignored.
 *
 * # Safety
 * `m` must be NULL or a handle not yet freed.
 */
void vc_matrix_free(VcMatrix *m);

/**
 * Largest and smallest singular values and the condition number.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
VcStatus vc_condition(const VcMatrix *m, VcCondition *out);

/**
 * log10 of `max(1, s_+^(n-1) / sqrt(n))`, a lower bound on the condition
 * number of the Vandermonde matrix of `k`.
 *
 * # Safety
 * `k` must be a live handle; `log10value` must be writable.
 */
VcStatus vc_bound_easy(const VcKnots *k, double *log10value);

/**
 * log10 lower bound for the quasi-cyclic Vandermonde matrix of size 3q.
 *
 * # Safety
 * `log10value` must be writable.
 */
VcStatus vc_bound_quasi_cyclic(size_t q, VcQcMode mode, double *log10value);

/**
 * Mean and standard deviation of GENP relative residuals on DFT systems.
 *
 * # Safety
 * `mean` and `std` must be writable.
 */
VcStatus vc_genp_experiment(size_t n, size_t trials, uint64_t seed, double *mean, double *std);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VANDCOND_H */
