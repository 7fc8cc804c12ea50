#ifndef FFRANK_H
#define FFRANK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; 0 is success.
typedef enum FfrankStatus {
  FFRANK_STATUS_OK = 0,
  FFRANK_STATUS_NULL_ARGUMENT = 1,
  FFRANK_STATUS_INVALID_UTF8 = 2,
  FFRANK_STATUS_PARSE = 3,
  FFRANK_STATUS_INVALID_FIELD = 4,
  FFRANK_STATUS_INVALID_ARGUMENT = 5,
  FFRANK_STATUS_SINGULAR_CURVE = 6,
  // deg N_E < 4, so the L-function is not a polynomial of degree deg N_E − 4.
  FFRANK_STATUS_NEGATIVE_L_DEGREE = 7,
  FFRANK_STATUS_DEPTH_EXCEEDED = 8,
  FFRANK_STATUS_BUDGET_EXCEEDED = 9,
  FFRANK_STATUS_BUFFER_TOO_SMALL = 10,
  FFRANK_STATUS_INCONSISTENT = 11,
  FFRANK_STATUS_PANIC = 12,
} FfrankStatus;

// Fiber tables for one field, shared read-only by every curve computed against it.
typedef struct FfrankContext FfrankContext;

// One elliptic surface y² = x³ + A x + B with its L-polynomial.
typedef struct FfrankCurve FfrankCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Human-readable name of a status code (static storage).
const char *ffrank_status_name(enum FfrankStatus status);

// Message of the last failure on this thread (empty if none).
//
// # Safety
// `buf` must be null or valid for `len` bytes; `needed` null or writable.
enum FfrankStatus ffrank_last_error(char *buf, size_t len, size_t *needed);

// New context for F_q with fiber tables through extension degree `depth`
// (0 picks the largest depth with q^depth within the default budget).
//
// # Safety
// `out` must be writable; on success it owns a handle released by `ffrank_context_free`.
enum FfrankStatus ffrank_context_new(uint32_t q, size_t depth, struct FfrankContext **out);

// # Safety
// `ctx` must be null or a handle from `ffrank_context_new` not yet freed.
void ffrank_context_free(struct FfrankContext *ctx);

// Fiber-table depth of a context, or 0 for null.
//
// # Safety
// `ctx` must be null or a live handle.
size_t ffrank_context_depth(const struct FfrankContext *ctx);

// Builds the surface for A, B (canonical comma form, ascending coefficients) and its
// L-polynomial. Fails with `SingularCurve` when Δ = 0 and `NegativeLDegree` for constant curves.
//
// # Safety
// `ctx` a live handle, `a`/`b` NUL-terminated strings, `out` writable.
enum FfrankStatus ffrank_curve_new(const struct FfrankContext *ctx,
                                   const char *a,
                                   const char *b,
                                   struct FfrankCurve **out);

// # Safety
// `curve` must be null or a handle from `ffrank_curve_new` not yet freed.
void ffrank_curve_free(struct FfrankCurve *curve);

// Scalar invariants: deg N_E, N = deg L, ε ∈ {±1}, analytic rank. Any output may be null.
//
// # Safety
// `curve` a live handle; non-null outputs writable.
enum FfrankStatus ffrank_curve_invariants(const struct FfrankCurve *curve,
                                          size_t *conductor_degree,
                                          size_t *l_degree,
                                          int32_t *epsilon,
                                          size_t *analytic_rank);

// Integer coefficients c_0..c_N.
//
// # Safety
// `curve` a live handle; `buf` null or valid for `len` values; `needed` null or writable.
enum FfrankStatus ffrank_curve_coefficients(const struct FfrankCurve *curve,
                                            int64_t *buf,
                                            size_t len,
                                            size_t *needed);

// Zeros μ_i of L(u) = Π(1 − μ_i u) as interleaved (re, im) pairs; `len` and `needed` count doubles.
//
// # Safety
// As for `ffrank_curve_coefficients`.
enum FfrankStatus ffrank_curve_zeros(const struct FfrankCurve *curve,
                                     double *buf,
                                     size_t len,
                                     size_t *needed);

// (1/n) Σ (μ_i/q)^n and the prime-side value it must equal, for 1 ≤ n ≤ table depth.
//
// # Safety
// `curve` a live handle; outputs writable.
enum FfrankStatus ffrank_curve_power_sum(const struct FfrankCurve *curve,
                                         size_t n,
                                         double *zero_side_re,
                                         double *zero_side_im,
                                         double *prime_side);

// JSON record: q, A, B, deg N_E, bad places, L, ε, analytic rank.
//
// # Safety
// `curve` a live handle; `buf` null or valid for `len` bytes; `needed` null or writable.
enum FfrankStatus ffrank_curve_json(const struct FfrankCurve *curve,
                                    char *buf,
                                    size_t len,
                                    size_t *needed);

// Quadratic symbol (f/d) ∈ {−1, 0, 1} for monic d of positive degree.
//
// # Safety
// `f`, `d` NUL-terminated strings; `out` writable.
enum FfrankStatus ffrank_jacobi_symbol(uint32_t q, const char *f, const char *d, int32_t *out);

// Quadratic Gauss sum G(V, χ_P) = Σ_{a mod P} (a/P) e(aV/P) for monic irreducible P.
//
// # Safety
// `v`, `p` NUL-terminated strings; outputs writable.
enum FfrankStatus ffrank_gauss_sum(uint32_t q,
                                   const char *v,
                                   const char *p,
                                   double *out_re,
                                   double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FFRANK_H */
