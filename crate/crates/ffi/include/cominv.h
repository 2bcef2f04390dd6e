#ifndef COMINV_H
#define COMINV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Variable family of a polynomial.
 */
typedef enum CominvFamily {
  COMINV_FAMILY_GENERIC = 0,
  COMINV_FAMILY_DIAGONAL = 1,
  COMINV_FAMILY_ABSTRACT = 2,
} CominvFamily;

/**
 * Result codes.
 */
typedef enum CominvStatus {
  COMINV_STATUS_OK = 0,
  COMINV_STATUS_NULL_POINTER = 1,
  COMINV_STATUS_INVALID_UTF8 = 2,
  COMINV_STATUS_PARSE = 3,
  COMINV_STATUS_DOMAIN = 4,
  COMINV_STATUS_PANIC = 5,
} CominvStatus;

/**
 * A linear combination of products of traces.
 */
typedef struct CominvExpr CominvExpr;

/**
 * An exact rational polynomial.
 */
typedef struct CominvPoly CominvPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null after a
 * success. The pointer stays valid until the next call into this library.
 */
const char *cominv_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void cominv_string_free(char *s);

/**
 * Parses a trace expression such as `tr(X1*X2) - 1/2*tr(X1)*tr(X2)`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum CominvStatus cominv_expr_parse(const char *text, struct CominvExpr **out);

/**
 * # Safety
 * `e` must be null or a handle from this library, not yet freed.
 */
void cominv_expr_free(struct CominvExpr *e);

/**
 * # Safety
 * `e` must be a live handle; `out` must be writable.
 */
enum CominvStatus cominv_expr_render(const struct CominvExpr *e, char **out);

/**
 * Rewrites `e` so that no product has more than `n` trace factors, using
 * the `n×n` trace identity.
 *
 * # Safety
 * `e` must be a live handle; `out` must be writable.
 */
enum CominvStatus cominv_expr_reduce(const struct CominvExpr *e, size_t n, struct CominvExpr **out);

/**
 * Evaluates `e` on `m` generic `n×n` matrices.
 *
 * # Safety
 * `e` must be a live handle; `out` must be writable.
 */
enum CominvStatus cominv_expr_eval_generic(const struct CominvExpr *e,
                                           size_t n,
                                           size_t m,
                                           struct CominvPoly **out);

/**
 * Evaluates `e` on `m` diagonal `n×n` matrices.
 *
 * # Safety
 * `e` must be a live handle; `out` must be writable.
 */
enum CominvStatus cominv_expr_eval_diagonal(const struct CominvExpr *e,
                                            size_t n,
                                            size_t m,
                                            struct CominvPoly **out);

/**
 * Parses a polynomial in the given family, e.g. `x[1,1]*x[2,2] + 3`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum CominvStatus cominv_poly_parse(const char *text,
                                    enum CominvFamily family,
                                    struct CominvPoly **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not yet freed.
 */
void cominv_poly_free(struct CominvPoly *p);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum CominvStatus cominv_poly_render(const struct CominvPoly *p, char **out);

/**
 * 1 if `p` is the zero polynomial, 0 if not, -1 if `p` is null.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
int cominv_poly_is_zero(const struct CominvPoly *p);

/**
 * Coefficients of a multilinear multisymmetric diagonal polynomial in the
 * `t_Λ` basis, as a JSON object from partition to rational string.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum CominvStatus cominv_poly_express(const struct CominvPoly *p, size_t n, size_t m, char **out);

/**
 * Dimension of the multilinear slice for `m` matrices of size `n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CominvStatus cominv_multilinear_dim(size_t n, size_t m, uint64_t *out);

/**
 * Runs the command line `argv[0..argc]` (program name first) and returns
 * the JSON report with the process exit code it would produce. Argument
 * errors (and `--help`) return `COMINV_STATUS_PARSE` with a null report and
 * the usage text as the last error.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; `json` and `exit_code`
 * must be writable.
 */
enum CominvStatus cominv_run(int argc, const char *const *argv, char **json, int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMINV_H */
