#ifndef UMM_H
#define UMM_H

/* Generated by cbindgen from umm-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum UmmStatus {
  UMM_STATUS_OK = 0,
  UMM_STATUS_NULL_POINTER = 1,
  UMM_STATUS_INVALID_UTF8 = 2,
  UMM_STATUS_PARSE = 3,
  UMM_STATUS_CONFIG = 4,
  UMM_STATUS_COMPUTE = 5,
  UMM_STATUS_PANIC = 6,
} UmmStatus;

/**
 * Unitary count, constant generators and their trace data.
 */
typedef struct UmmContext UmmContext;

/**
 * A polynomial parsed against a context.
 */
typedef struct UmmPolynomial UmmPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The most recent error on this thread, or NULL after a successful call.
 * Valid until the next call on the same thread; do not free.
 */
const char *umm_last_error(void);

/**
 * Library version as a static string.
 */
const char *umm_version(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` is NULL or came from this library and has not been freed.
 */
void umm_string_free(char *s);

/**
 * Creates a context with `unitaries` unitaries. `constants_json` is NULL for
 * no constants, or an object such as
 * `{"kind": "spectra", "generators": ["x"], "values": [[1, "1/2"]]}`.
 *
 * # Safety
 * `constants_json` is NULL or a NUL-terminated string; `out` is writable.
 */
enum UmmStatus umm_context_new(uintptr_t unitaries,
                               const char *constants_json,
                               struct UmmContext **out);

/**
 * # Safety
 * `ctx` is NULL or came from [`umm_context_new`] and has not been freed.
 */
void umm_context_free(struct UmmContext *ctx);

/**
 * Parses `text` in the context's alphabet, e.g. `"x u1 y u1^-1 - 1/2*u2"`.
 *
 * # Safety
 * `ctx` is live, `text` is NUL-terminated and `out` is writable.
 */
enum UmmStatus umm_polynomial_parse(const struct UmmContext *ctx,
                                    const char *text,
                                    struct UmmPolynomial **out);

/**
 * # Safety
 * `p` is NULL or came from [`umm_polynomial_parse`] and has not been freed.
 */
void umm_polynomial_free(struct UmmPolynomial *p);

/**
 * Canonical text of `p`; free with [`umm_string_free`].
 *
 * # Safety
 * `ctx` and `p` are live and `out` is writable.
 */
enum UmmStatus umm_polynomial_format(const struct UmmContext *ctx,
                                     const struct UmmPolynomial *p,
                                     char **out);

/**
 * Coefficients of `t^0..t^order` of the master field on `p` for the
 * potential `v` (NULL for Haar), as a JSON array.
 *
 * # Safety
 * `ctx` and `p` are live, `v` is NULL or live, and `out` is writable.
 */
enum UmmStatus umm_master_field_json(const struct UmmContext *ctx,
                                     const struct UmmPolynomial *p,
                                     const struct UmmPolynomial *v,
                                     uintptr_t order,
                                     char **out);

/**
 * Coefficients of `τ_kg(args[0], ..., args[k-1])` through `t^order` for the
 * potential `v` (NULL for Haar), as a JSON array.
 *
 * # Safety
 * `ctx` is live, `args` holds `k` live polynomials, `v` is NULL or live and
 * `out` is writable.
 */
enum UmmStatus umm_tau_kg_json(const struct UmmContext *ctx,
                               const struct UmmPolynomial *const *args,
                               uintptr_t k,
                               uintptr_t genus,
                               const struct UmmPolynomial *v,
                               uintptr_t order,
                               char **out);

/**
 * Monotone double Hurwitz number of genus `genus` for partitions `alpha`
 * and `beta` of the same size, under the calibrated convention.
 *
 * # Safety
 * `alpha` and `beta` hold `alpha_len` and `beta_len` entries; `out` is writable.
 */
enum UmmStatus umm_hurwitz_count(uintptr_t genus,
                                 const uintptr_t *alpha,
                                 uintptr_t alpha_len,
                                 const uintptr_t *beta,
                                 uintptr_t beta_len,
                                 uint64_t *out);

/**
 * Runs a full command from a JSON run config (the CLI's config format) and
 * returns the JSON report. Failed checks still return `UMM_STATUS_OK`; read
 * `checks` in the report.
 *
 * # Safety
 * `config_json` is NUL-terminated and `out` is writable.
 */
enum UmmStatus umm_run_json(const char *config_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UMM_H */
