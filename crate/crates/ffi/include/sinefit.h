#ifndef SINEFIT_H
#define SINEFIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SinefitStatus {
  SINEFIT_STATUS_OK = 0,
  SINEFIT_STATUS_NULL_POINTER = 1,
  SINEFIT_STATUS_INVALID_ARGUMENT = 2,
  SINEFIT_STATUS_INVALID_FRAME_LENGTH = 3,
  SINEFIT_STATUS_FREQUENCY_OUT_OF_RANGE = 4,
  SINEFIT_STATUS_UNDERDETERMINED = 5,
  SINEFIT_STATUS_DUPLICATE_FREQUENCY = 6,
  SINEFIT_STATUS_LENGTH_MISMATCH = 7,
  SINEFIT_STATUS_SINGULAR_SYSTEM = 8,
  SINEFIT_STATUS_ZERO_ENERGY_SIGNAL = 9,
  SINEFIT_STATUS_BUFFER_TOO_SMALL = 10,
  SINEFIT_STATUS_PANIC = 11,
} SinefitStatus;

/**
 * Values accepted by [`sinefit_flop_model`].
 */
typedef enum SinefitFlopMethod {
  SINEFIT_FLOP_METHOD_LINEAR = 0,
  SINEFIT_FLOP_METHOD_NONLINEAR = 1,
  SINEFIT_FLOP_METHOD_MP_SLOW = 2,
} SinefitFlopMethod;

/**
 * Opaque frame settings (length, window, time axis).
 */
typedef struct SinefitFrame SinefitFrame;

/**
 * One partial: `(amp + amp_slope t) cos(freq t + phase)` on the centred
 * time axis of the frame.
 */
typedef struct SinefitPartial {
  double amp;
  double freq;
  double phase;
  double amp_slope;
} SinefitPartial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or NULL. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *sinefit_last_error(void);

/**
 * Creates frame settings for `frame_len` samples (even, at least 8).
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum SinefitStatus sinefit_frame_new(size_t frame_len, struct SinefitFrame **out);

/**
 * Releases a handle from [`sinefit_frame_new`]. NULL is ignored.
 *
 * # Safety
 * `frame` must come from [`sinefit_frame_new`] and not be used again.
 */
void sinefit_frame_free(struct SinefitFrame *frame);

/**
 * Frame length of the handle, or 0 for NULL.
 *
 * # Safety
 * `frame` must be NULL or a live handle.
 */
size_t sinefit_frame_len(const struct SinefitFrame *frame);

/**
 * Linear estimate of `n` partials starting from `theta`, with `iters`
 * Gauss-Seidel sweeps. Writes `n` partials to `out`.
 *
 * # Safety
 * `x` holds `x_len` doubles, `theta` holds `n`, `out` has room for `n`.
 */
enum SinefitStatus sinefit_estimate_linear(const struct SinefitFrame *frame,
                                           const double *x,
                                           size_t x_len,
                                           const double *theta,
                                           size_t n,
                                           size_t iters,
                                           struct SinefitPartial *out);

/**
 * Non-linear estimate: `iters` outer iterations with step scale `alpha`
 * in (0, 1]. Writes `n` partials to `out`.
 *
 * # Safety
 * As [`sinefit_estimate_linear`].
 */
enum SinefitStatus sinefit_estimate_nonlinear(const struct SinefitFrame *frame,
                                              const double *x,
                                              size_t x_len,
                                              const double *theta,
                                              size_t n,
                                              size_t iters,
                                              double alpha,
                                              struct SinefitPartial *out);

/**
 * Up to `max_partials` peak frequencies of the windowed spectrum, loudest
 * first. `*out_count` receives how many were written.
 *
 * # Safety
 * `x` holds `x_len` doubles, `out_freqs` has room for `max_partials`,
 * `out_count` is valid for one write.
 */
enum SinefitStatus sinefit_dft_peak_pick(const struct SinefitFrame *frame,
                                         const double *x,
                                         size_t x_len,
                                         size_t max_partials,
                                         double *out_freqs,
                                         size_t *out_count);

/**
 * Evaluates `n` partials over one frame, optionally windowed. `out_len`
 * must be at least the frame length.
 *
 * # Safety
 * `partials` holds `n` entries and `out` has room for `out_len` doubles.
 */
enum SinefitStatus sinefit_synthesize(const struct SinefitFrame *frame,
                                      const struct SinefitPartial *partials,
                                      size_t n,
                                      bool windowed,
                                      double *out,
                                      size_t out_len);

/**
 * Closed-form operations per frame for a [`SinefitFlopMethod`] value.
 * Returns 0 for an unknown method or a non-linear count with zero
 * iterations.
 */
uint64_t sinefit_flop_model(uint32_t method,
                            uint64_t frame_len,
                            uint64_t partials,
                            uint64_t iters,
                            uint64_t oversample);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SINEFIT_H */
