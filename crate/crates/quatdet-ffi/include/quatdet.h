#ifndef QUATDET_H
#define QUATDET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an FFI call.
 */
typedef enum {
  QdStatusOk = 0,
  /**
   * A required pointer argument was null.
   */
  QdStatusNullArgument,
  /**
   * A string argument was not valid UTF-8.
   */
  QdStatusInvalidUtf8,
  /**
   * The input text did not parse as the matrix JSON format.
   */
  QdStatusParseError,
  /**
   * Matrix shape violated a precondition (not square, bad index...).
   */
  QdStatusDimensionError,
  /**
   * The matrix (or a required block or entry) is singular or zero.
   */
  QdStatusSingular,
  /**
   * The operation requires a hermitian matrix.
   */
  QdStatusNotHermitian,
  /**
   * An iterative kernel failed to converge or a residual check failed.
   */
  QdStatusNumericalFailure,
  /**
   * The five determinant strategies disagree beyond tolerance.
   */
  QdStatusDisagreement,
} QdStatus;

/**
 * Determinant strategy selector.
 */
typedef enum {
  QdStrategyGauss = 0,
  QdStrategyComplexify,
  QdStrategyEigen,
  QdStrategySvd,
  QdStrategySchurComplement,
} QdStrategy;

/**
 * Opaque matrix handle.
 */
typedef struct QdMatrix QdMatrix;

/**
 * Per-strategy Study determinant values and agreement diagnostics.
 */
typedef struct {
  double sdet_gauss;
  double sdet_complexify;
  double sdet_eigen;
  double sdet_svd;
  double sdet_schur_complement;
  double max_rel_spread;
  bool singular;
} QdDetReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; never freed.
 */
const char *qd_version(void);

/**
 * Builds a matrix from row-major entries, four doubles `[a, b, c, d]` per
 * entry (so `components` holds `rows * cols * 4` doubles).
 *
 * # Safety
 * `components` must point to `rows * cols * 4` readable doubles and `out`
 * to a writable pointer slot.
 */
QdStatus qd_matrix_new(size_t rows, size_t cols, const double *components, QdMatrix **out);

/**
 * Parses the JSON matrix format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
QdStatus qd_matrix_parse_json(const char *json, QdMatrix **out);

/**
 * Releases a matrix handle; a null pointer is a no-op.
 *
 * # Safety
 * `m` must have come from this library and not be freed twice.
 */
void qd_matrix_free(QdMatrix *m);

/**
 * Row count; 0 for a null handle.
 *
 * # Safety
 * `m` must be a live handle or null.
 */
size_t qd_matrix_rows(const QdMatrix *m);

/**
 * Column count; 0 for a null handle.
 *
 * # Safety
 * `m` must be a live handle or null.
 */
size_t qd_matrix_cols(const QdMatrix *m);

/**
 * Copies entry `(i, j)` into `out[0..4]` as `[a, b, c, d]`.
 *
 * # Safety
 * `m` must be a live handle; `out` must point to four writable doubles.
 */
QdStatus qd_matrix_get(const QdMatrix *m, size_t i, size_t j, double *out);

/**
 * Serializes the matrix to a newly allocated JSON string; release it with
 * `qd_string_free`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
QdStatus qd_matrix_to_json(const QdMatrix *m, char **out);

/**
 * Frees a string allocated by this library; null is a no-op.
 *
 * # Safety
 * `s` must have been returned by `qd_matrix_to_json` and not freed before.
 */
void qd_string_free(char *s);

/**
 * Study determinant by the selected strategy.
 *
 * # Safety
 * `m` must be a live handle; `out` must point to a writable double.
 */
QdStatus qd_sdet(const QdMatrix *m, QdStrategy strategy, double *out);

/**
 * q-determinant (Study determinant squared).
 *
 * # Safety
 * `m` must be a live handle; `out` must point to a writable double.
 */
QdStatus qd_qdet(const QdMatrix *m, double *out);

/**
 * Dieudonne determinant (square root of the Study determinant).
 *
 * # Safety
 * `m` must be a live handle; `out` must point to a writable double.
 */
QdStatus qd_ddet(const QdMatrix *m, double *out);

/**
 * Signed real determinant of a hermitian matrix.
 *
 * # Safety
 * `m` must be a live handle; `out` must point to a writable double.
 */
QdStatus qd_hermitian_det(const QdMatrix *m, double *out);

/**
 * Double determinant of a possibly rectangular matrix.
 *
 * # Safety
 * `m` must be a live handle; `out` must point to a writable double.
 */
QdStatus qd_double_det(const QdMatrix *m, double *out);

/**
 * Runs all five determinant strategies. On `QD_STATUS_DISAGREEMENT` the
 * report is still filled so the caller can inspect the spread.
 *
 * # Safety
 * `m` must be a live handle; `out` must point to a writable report.
 */
QdStatus qd_det_report(const QdMatrix *m, QdDetReport *out);

/**
 * Inverse by Schur-complement recursion (with pivoting).
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
QdStatus qd_invert(const QdMatrix *m, QdMatrix **out);

/**
 * Closed-form inverse of a 2x2 matrix (zero-entry limit conventions
 * included).
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
QdStatus qd_inverse_2x2(const QdMatrix *m, QdMatrix **out);

/**
 * Right eigenvalues as canonical complex representatives, descending by
 * `(re, im)`; writes `n` values into each output array.
 *
 * # Safety
 * `m` must be a live square handle of size `n`; `out_re` and `out_im`
 * must each point to `n` writable doubles.
 */
QdStatus qd_right_eigenvalues(const QdMatrix *m, double *out_re, double *out_im);

/**
 * Singular values, non-increasing; writes `min(rows, cols)` doubles.
 *
 * # Safety
 * `m` must be a live handle; `out` must point to `min(rows, cols)`
 * writable doubles.
 */
QdStatus qd_singular_values(const QdMatrix *m, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUATDET_H */
