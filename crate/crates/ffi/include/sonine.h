#ifndef SONINE_H
#define SONINE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum SonineStatus {
  SONINE_STATUS_OK = 0,
  SONINE_STATUS_INVALID_ARGUMENT = 1,
  SONINE_STATUS_NULL_POINTER = 2,
  SONINE_STATUS_POLE = 3,
  SONINE_STATUS_NON_CONVERGENCE = 4,
  SONINE_STATUS_SINGULAR = 5,
  SONINE_STATUS_DOMAIN = 6,
  SONINE_STATUS_PANIC = 7,
  SONINE_STATUS_BUFFER_TOO_SMALL = 8,
} SonineStatus;

/**
 * An exact table of connection coefficients.
 */
typedef struct SonineConnectionTable SonineConnectionTable;

/**
 * Truncation policy and last error message.
 */
typedef struct SonineContext SonineContext;

/**
 * A complex number.
 */
typedef struct SonineComplex {
  double re;
  double im;
} SonineComplex;

/**
 * A truncated series value.
 */
typedef struct SonineEval {
  struct SonineComplex value;
  uint32_t degree_used;
  double tail_bound;
} SonineEval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * New context with the default truncation policy (degree 30, 1e-12, 3).
 */
struct SonineContext *sonine_context_new(void);

/**
 * # Safety
 * `ctx` must be null or come from [`sonine_context_new`] and not be used again.
 */
void sonine_context_free(struct SonineContext *ctx);

/**
 * Message of the last failed call on `ctx`; empty after a success. The
 * pointer stays valid until the next call with the same context.
 *
 * # Safety
 * `ctx` must be null or a live context.
 */
const char *sonine_last_error(const struct SonineContext *ctx);

/**
 * Replaces the truncation policy used by the series evaluators.
 *
 * # Safety
 * `ctx` must be null or a live context.
 */
enum SonineStatus sonine_set_policy(struct SonineContext *ctx,
                                    uint32_t max_degree,
                                    double rel_tol,
                                    uint32_t consecutive_small);

/**
 * J_k^B(x, y) for k = (k1, k2) and complex vectors of length n.
 *
 * # Safety
 * `x` and `y` must point to `n` values; `out` must be writable.
 */
enum SonineStatus sonine_bessel_b(struct SonineContext *ctx,
                                  size_t n,
                                  double k1,
                                  double k2,
                                  const struct SonineComplex *x,
                                  const struct SonineComplex *y,
                                  struct SonineEval *out);

/**
 * J_{k2}^A(x, y), n ≥ 2.
 *
 * # Safety
 * `x` and `y` must point to `n` values; `out` must be writable.
 */
enum SonineStatus sonine_bessel_a(struct SonineContext *ctx,
                                  size_t n,
                                  double k2,
                                  const struct SonineComplex *x,
                                  const struct SonineComplex *y,
                                  struct SonineEval *out);

/**
 * The normalized one-variable Bessel function j_alpha(z).
 *
 * # Safety
 * `out` must be writable.
 */
enum SonineStatus sonine_bessel_1d(struct SonineContext *ctx,
                                   double alpha,
                                   struct SonineComplex z,
                                   struct SonineComplex *out);

/**
 * C_λ^α(x) for a partition with n parts (zeros allowed) and n variables.
 *
 * # Safety
 * `parts` and `x` must point to `n` values; `out` must be writable.
 */
enum SonineStatus sonine_jack_eval(struct SonineContext *ctx,
                                   const uint32_t *parts,
                                   size_t n,
                                   int64_t alpha_num,
                                   int64_t alpha_den,
                                   const struct SonineComplex *x,
                                   struct SonineComplex *out);

/**
 * The generalized binomial (κ choose λ) as the string "p/q".
 *
 * # Safety
 * `kappa` and `lambda` must point to `n` values; `buf` must hold `buf_len`
 * bytes; `needed` may be null.
 */
enum SonineStatus sonine_binomial(struct SonineContext *ctx,
                                  const uint32_t *kappa,
                                  const uint32_t *lambda,
                                  size_t n,
                                  int64_t alpha_num,
                                  int64_t alpha_den,
                                  char *buf,
                                  size_t buf_len,
                                  size_t *needed);

/**
 * The normalized Laguerre polynomial L̃_κ^a(x; α) at a real point.
 *
 * # Safety
 * `kappa` and `x` must point to `n` values; `out` must be writable.
 */
enum SonineStatus sonine_laguerre_normalized(struct SonineContext *ctx,
                                             const uint32_t *kappa,
                                             size_t n,
                                             double a,
                                             double alpha,
                                             const double *x,
                                             struct SonineEval *out);

/**
 * Exact connection coefficients for κ at rational (a, α, h). On failure
 * `*table` is set to null.
 *
 * # Safety
 * `kappa` must point to `n` values; `table` must be writable.
 */
enum SonineStatus sonine_connection_new(struct SonineContext *ctx,
                                        const uint32_t *kappa,
                                        size_t n,
                                        int64_t a_num,
                                        int64_t a_den,
                                        int64_t alpha_num,
                                        int64_t alpha_den,
                                        int64_t h_num,
                                        int64_t h_den,
                                        struct SonineConnectionTable **table);

/**
 * Number of entries (sub-partitions of κ); 0 for a null table.
 *
 * # Safety
 * `table` must be null or live.
 */
size_t sonine_connection_len(const struct SonineConnectionTable *table);

/**
 * Entry `index`: λ into `lambda` (n values), value as a double and as the
 * NUL-terminated string "p/q" owned by the table.
 *
 * # Safety
 * `table` must be live; `lambda` must hold n values; `value` and `exact` may
 * be null.
 */
enum SonineStatus sonine_connection_entry(const struct SonineConnectionTable *table,
                                          size_t index,
                                          uint32_t *lambda,
                                          double *value,
                                          const char **exact);

/**
 * # Safety
 * `table` must be null or come from [`sonine_connection_new`] and not be
 * used again.
 */
void sonine_connection_free(struct SonineConnectionTable *table);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SONINE_H */
