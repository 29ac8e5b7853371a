//! C ABI for the quatdet library.
//!
//! Matrices cross the boundary as opaque `QdMatrix*` handles created by
//! `qd_matrix_new` or `qd_matrix_parse_json` and released with
//! `qd_matrix_free`. Every fallible call returns a `QdStatus`; outputs are
//! written through pointers only on `QD_STATUS_OK` (except `qd_det_report`,
//! which also fills its report when the strategies disagree, so the caller
//! can inspect the five values). The generated header lives at
//! `include/quatdet.h`.

use std::ffi::{c_char, CStr, CString};

use quatdet::qdet::{self, Strategy};
use quatdet::quat::Quaternion;
use quatdet::{blockinv, io, spectral, Error, QMatrix};

/// Opaque matrix handle.
pub struct QdMatrix(QMatrix);

/// Outcome of an FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdStatus {
    QdStatusOk = 0,
    /// A required pointer argument was null.
    QdStatusNullArgument,
    /// A string argument was not valid UTF-8.
    QdStatusInvalidUtf8,
    /// The input text did not parse as the matrix JSON format.
    QdStatusParseError,
    /// Matrix shape violated a precondition (not square, bad index...).
    QdStatusDimensionError,
    /// The matrix (or a required block or entry) is singular or zero.
    QdStatusSingular,
    /// The operation requires a hermitian matrix.
    QdStatusNotHermitian,
    /// An iterative kernel failed to converge or a residual check failed.
    QdStatusNumericalFailure,
    /// The five determinant strategies disagree beyond tolerance.
    QdStatusDisagreement,
}

/// Determinant strategy selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdStrategy {
    QdStrategyGauss = 0,
    QdStrategyComplexify,
    QdStrategyEigen,
    QdStrategySvd,
    QdStrategySchurComplement,
}

impl From<QdStrategy> for Strategy {
    fn from(s: QdStrategy) -> Strategy {
        match s {
            QdStrategy::QdStrategyGauss => Strategy::Gauss,
            QdStrategy::QdStrategyComplexify => Strategy::Complexify,
            QdStrategy::QdStrategyEigen => Strategy::Eigen,
            QdStrategy::QdStrategySvd => Strategy::Svd,
            QdStrategy::QdStrategySchurComplement => Strategy::SchurComplement,
        }
    }
}

/// Per-strategy Study determinant values and agreement diagnostics.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QdDetReport {
    pub sdet_gauss: f64,
    pub sdet_complexify: f64,
    pub sdet_eigen: f64,
    pub sdet_svd: f64,
    pub sdet_schur_complement: f64,
    pub max_rel_spread: f64,
    pub singular: bool,
}

fn status_of(e: &Error) -> QdStatus {
    match e {
        Error::Parse(_) => QdStatus::QdStatusParseError,
        Error::DimensionMismatch(_)
        | Error::NonSquare { .. }
        | Error::BadSplitIndex { .. }
        | Error::IndexOutOfRange(_)
        | Error::IndexEqual(_)
        | Error::NotAPermutation(_) => QdStatus::QdStatusDimensionError,
        Error::SingularMatrix
        | Error::SingularLeadingBlock
        | Error::SingularSchurComplement
        | Error::ZeroDivision
        | Error::ZeroEntry { .. } => QdStatus::QdStatusSingular,
        Error::NotHermitian => QdStatus::QdStatusNotHermitian,
        Error::StrategyDisagreement { .. } => QdStatus::QdStatusDisagreement,
        _ => QdStatus::QdStatusNumericalFailure,
    }
}

/// Library version as a static NUL-terminated string; never freed.
#[no_mangle]
pub extern "C" fn qd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a matrix from row-major entries, four doubles `[a, b, c, d]` per
/// entry (so `components` holds `rows * cols * 4` doubles).
///
/// # Safety
/// `components` must point to `rows * cols * 4` readable doubles and `out`
/// to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qd_matrix_new(
    rows: usize,
    cols: usize,
    components: *const f64,
    out: *mut *mut QdMatrix,
) -> QdStatus {
    if components.is_null() || out.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    if rows == 0 || cols == 0 {
        return QdStatus::QdStatusDimensionError;
    }
    let data = std::slice::from_raw_parts(components, rows * cols * 4);
    let m = QMatrix::from_fn(rows, cols, |i, j| {
        let base = (i * cols + j) * 4;
        Quaternion::new(data[base], data[base + 1], data[base + 2], data[base + 3])
    });
    *out = Box::into_raw(Box::new(QdMatrix(m)));
    QdStatus::QdStatusOk
}

/// Parses the JSON matrix format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qd_matrix_parse_json(
    json: *const c_char,
    out: *mut *mut QdMatrix,
) -> QdStatus {
    if json.is_null() || out.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => return QdStatus::QdStatusInvalidUtf8,
    };
    match io::matrix_from_json(text) {
        Ok(m) => {
            *out = Box::into_raw(Box::new(QdMatrix(m)));
            QdStatus::QdStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a matrix handle; a null pointer is a no-op.
///
/// # Safety
/// `m` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qd_matrix_free(m: *mut QdMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row count; 0 for a null handle.
///
/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qd_matrix_rows(m: *const QdMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// Column count; 0 for a null handle.
///
/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qd_matrix_cols(m: *const QdMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Copies entry `(i, j)` into `out[0..4]` as `[a, b, c, d]`.
///
/// # Safety
/// `m` must be a live handle; `out` must point to four writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qd_matrix_get(
    m: *const QdMatrix,
    i: usize,
    j: usize,
    out: *mut f64,
) -> QdStatus {
    let Some(m) = m.as_ref() else {
        return QdStatus::QdStatusNullArgument;
    };
    if out.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    if i >= m.0.rows() || j >= m.0.cols() {
        return QdStatus::QdStatusDimensionError;
    }
    let q = m.0[(i, j)];
    let slot = std::slice::from_raw_parts_mut(out, 4);
    slot.copy_from_slice(&[q.a, q.b, q.c, q.d]);
    QdStatus::QdStatusOk
}

/// Serializes the matrix to a newly allocated JSON string; release it with
/// `qd_string_free`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qd_matrix_to_json(
    m: *const QdMatrix,
    out: *mut *mut c_char,
) -> QdStatus {
    let Some(m) = m.as_ref() else {
        return QdStatus::QdStatusNullArgument;
    };
    if out.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    let text = io::matrix_to_json(&m.0);
    match CString::new(text) {
        Ok(cstr) => {
            *out = cstr.into_raw();
            QdStatus::QdStatusOk
        }
        Err(_) => QdStatus::QdStatusNumericalFailure,
    }
}

/// Frees a string allocated by this library; null is a no-op.
///
/// # Safety
/// `s` must have been returned by `qd_matrix_to_json` and not freed before.
#[no_mangle]
pub unsafe extern "C" fn qd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn scalar_op(
    m: *const QdMatrix,
    out: *mut f64,
    f: impl FnOnce(&QMatrix) -> Result<f64, Error>,
) -> QdStatus {
    let Some(m) = m.as_ref() else {
        return QdStatus::QdStatusNullArgument;
    };
    if out.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    match f(&m.0) {
        Ok(v) => {
            *out = v;
            QdStatus::QdStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Study determinant by the selected strategy.
///
/// # Safety
/// `m` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qd_sdet(
    m: *const QdMatrix,
    strategy: QdStrategy,
    out: *mut f64,
) -> QdStatus {
    scalar_op(m, out, |m| qdet::sdet(m, strategy.into()))
}

/// q-determinant (Study determinant squared).
///
/// # Safety
/// `m` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qd_qdet(m: *const QdMatrix, out: *mut f64) -> QdStatus {
    scalar_op(m, out, qdet::qdet)
}

/// Dieudonne determinant (square root of the Study determinant).
///
/// # Safety
/// `m` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qd_ddet(m: *const QdMatrix, out: *mut f64) -> QdStatus {
    scalar_op(m, out, qdet::ddet)
}

/// Signed real determinant of a hermitian matrix.
///
/// # Safety
/// `m` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qd_hermitian_det(m: *const QdMatrix, out: *mut f64) -> QdStatus {
    scalar_op(m, out, qdet::hermitian_det)
}

/// Double determinant of a possibly rectangular matrix.
///
/// # Safety
/// `m` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qd_double_det(m: *const QdMatrix, out: *mut f64) -> QdStatus {
    scalar_op(m, out, qdet::double_det)
}

/// Runs all five determinant strategies. On `QD_STATUS_DISAGREEMENT` the
/// report is still filled so the caller can inspect the spread.
///
/// # Safety
/// `m` must be a live handle; `out` must point to a writable report.
#[no_mangle]
pub unsafe extern "C" fn qd_det_report(
    m: *const QdMatrix,
    out: *mut QdDetReport,
) -> QdStatus {
    let Some(m) = m.as_ref() else {
        return QdStatus::QdStatusNullArgument;
    };
    if out.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    let fill = |r: &qdet::DetReport, out: *mut QdDetReport| {
        *out = QdDetReport {
            sdet_gauss: r.sdet_gauss,
            sdet_complexify: r.sdet_complexify,
            sdet_eigen: r.sdet_eigen,
            sdet_svd: r.sdet_svd,
            sdet_schur_complement: r.sdet_schur,
            max_rel_spread: r.max_rel_spread,
            singular: r.singular,
        };
    };
    match qdet::det_report(&m.0) {
        Ok(r) => {
            fill(&r, out);
            QdStatus::QdStatusOk
        }
        Err(Error::StrategyDisagreement {
            spread, values, ..
        }) => {
            fill(
                &qdet::DetReport {
                    sdet_gauss: values[0],
                    sdet_complexify: values[1],
                    sdet_eigen: values[2],
                    sdet_svd: values[3],
                    sdet_schur: values[4],
                    max_rel_spread: spread,
                    singular: false,
                },
                out,
            );
            QdStatus::QdStatusDisagreement
        }
        Err(e) => status_of(&e),
    }
}

/// Inverse by Schur-complement recursion (with pivoting).
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qd_invert(m: *const QdMatrix, out: *mut *mut QdMatrix) -> QdStatus {
    let Some(m) = m.as_ref() else {
        return QdStatus::QdStatusNullArgument;
    };
    if out.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    match blockinv::invert(&m.0) {
        Ok(inv) => {
            *out = Box::into_raw(Box::new(QdMatrix(inv)));
            QdStatus::QdStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Closed-form inverse of a 2x2 matrix (zero-entry limit conventions
/// included).
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qd_inverse_2x2(
    m: *const QdMatrix,
    out: *mut *mut QdMatrix,
) -> QdStatus {
    let Some(m) = m.as_ref() else {
        return QdStatus::QdStatusNullArgument;
    };
    if out.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    match blockinv::inverse_2x2(&m.0) {
        Ok(inv) => {
            *out = Box::into_raw(Box::new(QdMatrix(inv)));
            QdStatus::QdStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Right eigenvalues as canonical complex representatives, descending by
/// `(re, im)`; writes `n` values into each output array.
///
/// # Safety
/// `m` must be a live square handle of size `n`; `out_re` and `out_im`
/// must each point to `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qd_right_eigenvalues(
    m: *const QdMatrix,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QdStatus {
    let Some(m) = m.as_ref() else {
        return QdStatus::QdStatusNullArgument;
    };
    if out_re.is_null() || out_im.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    match spectral::right_eigenvalues(&m.0) {
        Ok(spec) => {
            let n = spec.values.len();
            let re = std::slice::from_raw_parts_mut(out_re, n);
            let im = std::slice::from_raw_parts_mut(out_im, n);
            for (slot, v) in re.iter_mut().zip(&spec.values) {
                *slot = v.re;
            }
            for (slot, v) in im.iter_mut().zip(&spec.values) {
                *slot = v.im;
            }
            QdStatus::QdStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Singular values, non-increasing; writes `min(rows, cols)` doubles.
///
/// # Safety
/// `m` must be a live handle; `out` must point to `min(rows, cols)`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qd_singular_values(m: *const QdMatrix, out: *mut f64) -> QdStatus {
    let Some(m) = m.as_ref() else {
        return QdStatus::QdStatusNullArgument;
    };
    if out.is_null() {
        return QdStatus::QdStatusNullArgument;
    }
    match spectral::singular_values(&m.0) {
        Ok(sigma) => {
            let slot = std::slice::from_raw_parts_mut(out, sigma.len());
            slot.copy_from_slice(&sigma);
            QdStatus::QdStatusOk
        }
        Err(e) => status_of(&e),
    }
}
