#ifndef FERMICAP_H
#define FERMICAP_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcStatus {
  FC_STATUS_OK = 0,
  FC_STATUS_NULL_POINTER = 1,
  FC_STATUS_INVALID_ARGUMENT = 2,
  FC_STATUS_NUMERICS = 3,
  FC_STATUS_PANIC = 4,
} FcStatus;

/**
 * Opaque channel handle.
 */
typedef struct FcChannel FcChannel;

typedef struct FcCapacityReport {
  size_t modes;
  double smin_even;
  double smin_gaussian;
  double c1_gaussian;
} FcCapacityReport;

typedef struct FcMinimizeResult {
  double best_entropy;
  /**
   * best_entropy minus the closed-form Gaussian minimum.
   */
  double deviation;
  size_t restarts_agreeing;
  double dispersion;
  /**
   * Singular-value defect of the best state; negative when unavailable.
   */
  double witness_defect;
  bool witness_gaussian;
} FcMinimizeResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Valid until the next call.
 */
const char *fc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fc_version(void);

/**
 * Channel with explicit coefficients `b[0..2n]`.
 *
 * # Safety
 * `b` must point to `len` doubles; `out` must be writable.
 */
enum FcStatus fc_channel_new(size_t n, const double *b, size_t len, struct FcChannel **out);

/**
 * All coefficients equal to `b`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FcStatus fc_channel_plus(size_t n, double b, struct FcChannel **out);

/**
 * Coefficients b^{p/n} for p = 1..2n.
 *
 * # Safety
 * `out` must be writable.
 */
enum FcStatus fc_channel_times(size_t n, double b, struct FcChannel **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `ch` must come from an `fc_channel_*` constructor and not be used afterwards.
 */
void fc_channel_free(struct FcChannel *ch);

/**
 * Number of modes, or 0 for a null handle.
 *
 * # Safety
 * `ch` must be a live handle or null.
 */
size_t fc_channel_modes(const struct FcChannel *ch);

/**
 * Writes the 2n coefficients into `out` (capacity `len`).
 *
 * # Safety
 * `ch` must be live; `out` must hold `len` doubles.
 */
enum FcStatus fc_channel_coefficients(const struct FcChannel *ch, double *out, size_t len);

/**
 * Applies the channel to a 2^n × 2^n operator given as row-major real and
 * imaginary parts, each of `len` = 4^n doubles.
 *
 * # Safety
 * Input pointers must hold `len` readable doubles, output pointers `len`
 * writable doubles.
 */
enum FcStatus fc_channel_apply(const struct FcChannel *ch,
                               const double *re_in,
                               const double *im_in,
                               double *re_out,
                               double *im_out,
                               size_t len);

/**
 * Closed-form Gaussian minimum output entropy of coefficients `b`.
 *
 * # Safety
 * `b` must hold `len` doubles; `out` must be writable.
 */
enum FcStatus fc_smin_gaussian(const double *b, size_t len, double *out);

/**
 * Closed-form capacity report for a channel.
 *
 * # Safety
 * `ch` must be live; `out` must be writable.
 */
enum FcStatus fc_gaussian_capacity(const struct FcChannel *ch, struct FcCapacityReport *out);

/**
 * Runs the iterative minimizer with default tolerances.
 *
 * # Safety
 * `ch` must be live; `out` must be writable.
 */
enum FcStatus fc_minimize(const struct FcChannel *ch,
                          size_t iterations,
                          size_t restarts,
                          uint64_t seed,
                          struct FcMinimizeResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FERMICAP_H */
