#ifndef FRACL_H
#define FRACL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Equilibrium family; pass the integer value where a family is expected.
 */
typedef enum FraclFamily {
  FRACL_FAMILY_E0 = 0,
  FRACL_FAMILY_E1 = 1,
  FRACL_FAMILY_E2 = 2,
  FRACL_FAMILY_E3 = 3,
} FraclFamily;

typedef enum FraclStability {
  FRACL_STABILITY_ASYMPTOTICALLY_STABLE = 0,
  FRACL_STABILITY_UNSTABLE = 1,
  FRACL_STABILITY_NOT_ASYMPTOTICALLY_STABLE = 2,
} FraclStability;

/**
 * Result code of every fallible call.
 */
typedef enum FraclStatus {
  FRACL_STATUS_OK = 0,
  FRACL_STATUS_NULL_POINTER = 1,
  FRACL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The integration left the finite region; a partial trajectory is
   * still returned.
   */
  FRACL_STATUS_DIVERGED = 3,
  FRACL_STATUS_PANIC = 4,
} FraclStatus;

/**
 * Opaque trajectory handle.
 */
typedef struct FraclTrajectory FraclTrajectory;

typedef struct FraclComplex {
  double re;
  double im;
} FraclComplex;

typedef struct FraclState {
  double x1;
  double x2;
  double x3;
} FraclState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fracl_version(void);

/**
 * Message of the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *fracl_last_error_message(void);

/**
 * Gamma function for `x > 0`.
 *
 * # Safety
 * `out` must be NULL or valid for one `double` write.
 */
enum FraclStatus fracl_gamma(double x, double *out);

/**
 * Closed-form Jacobian eigenvalues at an equilibrium of the controlled
 * system, ordered as in the library.
 *
 * # Safety
 * `out` must be NULL or valid for three `FraclComplex` writes.
 */
enum FraclStatus fracl_eigen_closed_form(int32_t family_id,
                                         double m,
                                         double c1,
                                         double c2,
                                         struct FraclComplex *out);

/**
 * Eigenvalues from the cubic solver on the characteristic polynomial.
 *
 * # Safety
 * `out` must be NULL or valid for three `FraclComplex` writes.
 */
enum FraclStatus fracl_eigen_numeric(int32_t family_id,
                                     double m,
                                     double c1,
                                     double c2,
                                     struct FraclComplex *out);

/**
 * Matignon verdict at an equilibrium for order `q` in (0, 1].
 * `margins` (three doubles, may be NULL) receives `|arg l| - q pi/2` per
 * eigenvalue, NaN for zero eigenvalues.
 *
 * # Safety
 * `status` must be NULL or valid for one write; `margins` must be NULL or
 * valid for three `double` writes.
 */
enum FraclStatus fracl_classify(int32_t family_id,
                                double m,
                                double c1,
                                double c2,
                                double q,
                                enum FraclStability *status,
                                double *margins);

/**
 * Open interval of `m` on which the family is asymptotically stable.
 * `nonempty` is set to false (and the bounds left untouched) when no `m`
 * works. Family E0 is rejected.
 *
 * # Safety
 * All three pointers must be valid for one write.
 */
enum FraclStatus fracl_stability_interval(int32_t family_id,
                                          double c1,
                                          double c2,
                                          double *lo,
                                          double *hi,
                                          bool *nonempty);

/**
 * Lipschitz constant of the uncontrolled right-hand side on the box of
 * half-width `delta` around `x0`.
 *
 * # Safety
 * `out` must be NULL or valid for one `double` write.
 */
enum FraclStatus fracl_lipschitz_bound(struct FraclState x0, double delta, double *out);

/**
 * Riemann-Liouville integral of order `q` at `t` of samples `(ts[k], fs[k])`
 * on a grid starting at 0.
 *
 * # Safety
 * `ts` and `fs` must be valid for `n` reads; `out` for one write.
 */
enum FraclStatus fracl_rl_integral(const double *ts,
                                   const double *fs,
                                   size_t n,
                                   double q,
                                   double t,
                                   double *out);

/**
 * Integrate the controlled system with the fractional Euler scheme.
 *
 * With `anchored` false the controls are `c_i x_i`; with `anchored` true
 * they are `c_i (x_i - target_i)`. On success or divergence `*out` receives
 * a new handle (the partial trajectory when `FRACL_STATUS_DIVERGED` is
 * returned); otherwise `*out` is set to NULL.
 *
 * # Safety
 * `out` must be NULL or valid for one pointer write.
 */
enum FraclStatus fracl_integrate(double q,
                                 double h,
                                 size_t steps,
                                 struct FraclState x0,
                                 double c1,
                                 double c2,
                                 bool anchored,
                                 struct FraclState target,
                                 struct FraclTrajectory **out);

/**
 * Number of samples, including the initial state. 0 for NULL.
 *
 * # Safety
 * `traj` must be NULL or a live handle.
 */
size_t fracl_trajectory_len(const struct FraclTrajectory *traj);

/**
 * Time and state of sample `index`.
 *
 * # Safety
 * `traj` must be NULL or a live handle; `t` and `x` must be NULL or valid
 * for one write each (either may be NULL to skip it).
 */
enum FraclStatus fracl_trajectory_sample(const struct FraclTrajectory *traj,
                                         size_t index,
                                         double *t,
                                         struct FraclState *x);

/**
 * The trajectory as `j,t,x1,x2,x3` CSV text, byte-identical to the CLI
 * output. Free with [`fracl_string_free`]. NULL on failure.
 *
 * # Safety
 * `traj` must be NULL or a live handle.
 */
char *fracl_trajectory_to_csv(const struct FraclTrajectory *traj);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a pointer returned by this library and not yet freed.
 */
void fracl_string_free(char *s);

/**
 * Release a trajectory handle. NULL is ignored.
 *
 * # Safety
 * `traj` must be NULL or a handle from [`fracl_integrate`] not yet freed.
 */
void fracl_trajectory_free(struct FraclTrajectory *traj);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACL_H */
