#ifndef CIRCLETONS_H
#define CIRCLETONS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by all fallible functions.
typedef enum CircletonsStatus {
  CIRCLETONS_STATUS_OK = 0,
  // An argument violates a documented precondition.
  CIRCLETONS_STATUS_INVALID_ARGUMENT = 1,
  // A required pointer was null.
  CIRCLETONS_STATUS_NULL_POINTER = 2,
  // The computation failed numerically.
  CIRCLETONS_STATUS_NUMERICAL = 3,
  // The output buffer is shorter than required.
  CIRCLETONS_STATUS_BUFFER_TOO_SMALL = 4,
  // Internal error; the library state is unaffected.
  CIRCLETONS_STATUS_PANIC = 5,
} CircletonsStatus;

// Opaque curve handle.
typedef struct CircletonsCurve CircletonsCurve;

// Scalar summary of a generated curve.
typedef struct CircletonsSummary {
  size_t samples;
  double period;
  double closure_error;
  double bending_energy;
  size_t peak_count;
} CircletonsSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or an empty string.
// The pointer stays valid until the next call into this library on the
// same thread.
const char *circletons_last_error(void);

// Library version as a static NUL-terminated string.
const char *circletons_version(void);

// Builds the circleton with wrapping number `omega` dressed at the
// resonance indices `ks[0..ks_len]` (strictly increasing, each in
// 1..omega), sampled at `samples` points of one period. On success `*out`
// receives a handle to free with `circletons_curve_free`.
//
// # Safety
// `ks` must point to `ks_len` readable values (or may be null when
// `ks_len` is 0); `out` must be a valid pointer.
enum CircletonsStatus circletons_generate(uint32_t omega,
                                          const uint32_t *ks,
                                          size_t ks_len,
                                          size_t samples,
                                          struct CircletonsCurve **out);

// Releases a curve handle. Null is ignored.
//
// # Safety
// `curve` must be null or a handle from `circletons_generate` that has not
// been freed.
void circletons_curve_free(struct CircletonsCurve *curve);

// Number of samples of the curve, or 0 for a null handle.
//
// # Safety
// `curve` must be null or a live handle.
size_t circletons_curve_len(const struct CircletonsCurve *curve);

// Copies the points as interleaved x, y, z into `xyz`, which must hold at
// least 3 * len doubles (`capacity` counts doubles).
//
// # Safety
// `curve` must be a live handle and `xyz` writable for `capacity` doubles.
enum CircletonsStatus circletons_curve_points(const struct CircletonsCurve *curve,
                                              double *xyz,
                                              size_t capacity);

// Copies the signed curvature samples into `kappa` (`capacity` doubles).
//
// # Safety
// `curve` must be a live handle and `kappa` writable for `capacity` doubles.
enum CircletonsStatus circletons_curve_curvature(const struct CircletonsCurve *curve,
                                                 double *kappa,
                                                 size_t capacity);

// Fills `*out` with the sample count, period, closure error, bending energy
// and curvature peak count.
//
// # Safety
// `curve` must be a live handle and `out` a valid pointer.
enum CircletonsStatus circletons_curve_summary(const struct CircletonsCurve *curve,
                                               struct CircletonsSummary *out);

// Imaginary part of the resonance point alpha = i sqrt(1 - k^2 / omega^2).
//
// # Safety
// `alpha_im` must be a valid pointer.
enum CircletonsStatus circletons_resonance_point(uint32_t k, uint32_t omega, double *alpha_im);

// Closed-form signed curvature of the (k, omega)-circleton at time t.
//
// # Safety
// `out` must be a valid pointer.
enum CircletonsStatus circletons_curvature(uint32_t k, uint32_t omega, double t, double *out);

// Number of multi-circletons with `size` simple factors on the
// `omega`-wrapped circle, C(omega - 1, size).
//
// # Safety
// `out` must be a valid pointer.
enum CircletonsStatus circletons_enumerate_count(uint32_t omega, uint32_t size, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CIRCLETONS_H */
