#ifndef COHERENCE_BATH_H
#define COHERENCE_BATH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CbStatus {
  CB_STATUS_OK = 0,
  CB_STATUS_NULL_POINTER = 1,
  CB_STATUS_INVALID_ARGUMENT = 2,
  CB_STATUS_UNPHYSICAL = 3,
  CB_STATUS_NUMERICAL = 4,
  CB_STATUS_PANIC = 5,
} CbStatus;

/**
 * Opaque handle to a validated 2x2 or 4x4 density matrix.
 */
typedef struct CbDensityMatrix CbDensityMatrix;

/**
 * Field environment. `mirror = false` ignores `u`.
 */
typedef struct CbEnvironment {
  bool mirror;
  double u;
  double ax;
  double ay;
  double az;
} CbEnvironment;

typedef struct CbRates {
  double a_coeff;
  double b_coeff;
  double gamma_eff;
} CbRates;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *cb_last_error_message(void);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum CbStatus cb_f_parallel(double u, double *out);

/**
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum CbStatus cb_f_perpendicular(double u, double *out);

/**
 * # Safety
 * `env` must point to a readable `CbEnvironment`; `out` must be writable.
 */
enum CbStatus cb_rate_coefficients(const struct CbEnvironment *env, struct CbRates *out);

/**
 * Evolved single-atom state at noise parameter `q`. `omega` is `Omega / gamma0`.
 *
 * # Safety
 * `env` must point to a readable `CbEnvironment`; `out` must be writable.
 * The returned handle must be released with `cb_density_free`.
 */
enum CbStatus cb_single_evolve(double theta,
                               double phi,
                               double q,
                               double omega,
                               const struct CbEnvironment *env,
                               struct CbDensityMatrix **out);

/**
 * # Safety
 * `out` must be writable. Release the handle with `cb_density_free`.
 */
enum CbStatus cb_bd_density(double c1, double c2, double c3, struct CbDensityMatrix **out);

/**
 * Applies the one-sided channel to a 4x4 handle, returning a new handle.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum CbStatus cb_apply_one_sided_channel(const struct CbDensityMatrix *rho,
                                         double damping,
                                         double phase,
                                         struct CbDensityMatrix **out);

/**
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum CbStatus cb_density_dim(const struct CbDensityMatrix *rho, size_t *out);

/**
 * Entry `(i, j)` as real and imaginary parts.
 *
 * # Safety
 * `rho` must be a live handle; `re` and `im` must be writable.
 */
enum CbStatus cb_density_get(const struct CbDensityMatrix *rho,
                             size_t i,
                             size_t j,
                             double *re,
                             double *im);

/**
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum CbStatus cb_c_l1(const struct CbDensityMatrix *rho, double *out);

/**
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum CbStatus cb_c_re(const struct CbDensityMatrix *rho, double *out);

/**
 * # Safety
 * `env` must point to a readable `CbEnvironment`; `out` must be writable.
 */
enum CbStatus cb_c_l1_trajectory(double theta,
                                 double q,
                                 const struct CbEnvironment *env,
                                 double *out);

/**
 * # Safety
 * `env` must point to a readable `CbEnvironment`; `out` must be writable.
 */
enum CbStatus cb_c_re_trajectory(double theta,
                                 double q,
                                 const struct CbEnvironment *env,
                                 double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum CbStatus cb_c_l1_bd(double c1, double c2, double c3, double q_prime, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum CbStatus cb_c_re_bd(double c1, double c2, double c3, double q_prime, double *out);

/**
 * Releases a handle. Null is a no-op.
 *
 * # Safety
 * `rho` must be null or a handle from this library not yet freed.
 */
void cb_density_free(struct CbDensityMatrix *rho);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COHERENCE_BATH_H */
