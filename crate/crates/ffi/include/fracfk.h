#ifndef FRACFK_H
#define FRACFK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  FRACFK_STATUS_OK = 0,
  FRACFK_STATUS_INVALID_ARGUMENT = 1,
  FRACFK_STATUS_CONFIG_ERROR = 2,
  FRACFK_STATUS_NUMERICAL_ERROR = 3,
  FRACFK_STATUS_NULL_POINTER = 4,
  FRACFK_STATUS_BUFFER_TOO_SMALL = 5,
  FRACFK_STATUS_PANIC = 6,
} FracfkStatus;

typedef enum {
  FRACFK_VARIANT_CORRECTED = 0,
  FRACFK_VARIANT_UNCORRECTED = 1,
  FRACFK_VARIANT_COMPARISON_INITIAL = 2,
  FRACFK_VARIANT_COMPARISON_SOURCE = 3,
} FracfkVariant;

/**
 * Nodal values of a solution at the final time level, boundary nodes included.
 */
typedef struct FracfkSolution FracfkSolution;

/**
 * Parsed study configuration and, after [`fracfk_study_run`], its report.
 */
typedef struct FracfkStudy FracfkStudy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or NULL. The caller
 * owns the returned string.
 */
char *fracfk_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fracfk_string_free(char *s);

/**
 * Writes the convolution weights d_0..d_n of BDF-`k` for exponent `gamma`
 * into `out`, which must hold `n + 1` values.
 *
 * # Safety
 * `out` must be valid for `out_len` writes.
 */
FracfkStatus fracfk_cq_weights(size_t k,
                               double gamma,
                               double tau,
                               size_t n,
                               double *out,
                               size_t out_len);

/**
 * Sizes of the starting-correction tables of BDF-`k`: `k - 1` values of a
 * and `(k - 2) * (k - 1)` values of b (row l, column j).
 *
 * # Safety
 * Both pointers must be valid for one write.
 */
FracfkStatus fracfk_correction_sizes(size_t k, size_t *a_len, size_t *b_len);

/**
 * Writes the correction coefficients a_j and, row-major, b_{l,j}.
 *
 * # Safety
 * `a` and `b` must be valid for `a_len` and `b_len` writes; `b` may be NULL
 * when `b_len` is zero.
 */
FracfkStatus fracfk_correction_coeffs(size_t k, double *a, size_t a_len, double *b, size_t b_len);

/**
 * Parses a JSON study configuration.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for one write.
 */
FracfkStatus fracfk_study_new(const char *json, FracfkStudy **out);

/**
 * Runs every cell. Returns `NumericalError` if any cell failed; the report
 * is kept either way.
 *
 * # Safety
 * `study` must be a live handle from [`fracfk_study_new`].
 */
FracfkStatus fracfk_study_run(FracfkStudy *study);

/**
 * CSV of a study that has been run, or NULL. The caller owns the string.
 *
 * # Safety
 * `study` must be a live handle.
 */
char *fracfk_study_csv(const FracfkStudy *study);

/**
 * # Safety
 * `study` must be NULL or a live handle; it is invalid afterwards.
 */
void fracfk_study_free(FracfkStudy *study);

/**
 * Solves the problem of a JSON configuration (its `problem`, `rho` and `T`)
 * in binary64 for one `alpha`, order, step count and mesh.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for one write.
 */
FracfkStatus fracfk_solve(const char *json,
                          double alpha,
                          size_t k,
                          size_t n_steps,
                          size_t n_elems,
                          FracfkVariant variant,
                          FracfkSolution **out);

/**
 * Number of nodal values, `n_elems + 1`.
 *
 * # Safety
 * `sol` must be NULL or a live handle.
 */
size_t fracfk_solution_len(const FracfkSolution *sol);

/**
 * Copies the real and imaginary parts of the final-time nodal values.
 *
 * # Safety
 * `re` and `im` must be valid for `len` writes.
 */
FracfkStatus fracfk_solution_values(const FracfkSolution *sol, double *re, double *im, size_t len);

/**
 * # Safety
 * `sol` must be NULL or a live handle; it is invalid afterwards.
 */
void fracfk_solution_free(FracfkSolution *sol);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACFK_H */
