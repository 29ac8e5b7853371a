//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers and status codes.

use std::ffi::{CStr, CString};
use std::ptr;

use quatdet_ffi::*;

fn make(rows: usize, cols: usize, components: &[f64]) -> *mut QdMatrix {
    let mut out: *mut QdMatrix = ptr::null_mut();
    let status = unsafe { qd_matrix_new(rows, cols, components.as_ptr(), &mut out) };
    assert_eq!(status, QdStatus::QdStatusOk);
    assert!(!out.is_null());
    out
}

fn identity2() -> *mut QdMatrix {
    make(
        2,
        2,
        &[
            1.0, 0.0, 0.0, 0.0, /* */ 0.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, /* */ 1.0, 0.0, 0.0, 0.0,
        ],
    )
}

#[test]
fn version_is_present() {
    let v = unsafe { CStr::from_ptr(qd_version()) };
    assert!(!v.to_str().unwrap().is_empty());
}

#[test]
fn build_query_free() {
    let m = make(
        1,
        2,
        &[1.5, -2.0, 0.25, 3.0, /* */ 0.0, 1.0, 0.0, 0.0],
    );
    unsafe {
        assert_eq!(qd_matrix_rows(m), 1);
        assert_eq!(qd_matrix_cols(m), 2);
        let mut entry = [0.0; 4];
        assert_eq!(qd_matrix_get(m, 0, 0, entry.as_mut_ptr()), QdStatus::QdStatusOk);
        assert_eq!(entry, [1.5, -2.0, 0.25, 3.0]);
        assert_eq!(
            qd_matrix_get(m, 1, 0, entry.as_mut_ptr()),
            QdStatus::QdStatusDimensionError
        );
        qd_matrix_free(m);
        qd_matrix_free(ptr::null_mut());
        assert_eq!(qd_matrix_rows(ptr::null()), 0);
    }
}

#[test]
fn sdet_all_strategies_on_identity() {
    let m = identity2();
    for strategy in [
        QdStrategy::QdStrategyGauss,
        QdStrategy::QdStrategyComplexify,
        QdStrategy::QdStrategyEigen,
        QdStrategy::QdStrategySvd,
        QdStrategy::QdStrategySchurComplement,
    ] {
        let mut value = -1.0;
        let status = unsafe { qd_sdet(m, strategy, &mut value) };
        assert_eq!(status, QdStatus::QdStatusOk);
        assert!((value - 1.0).abs() < 1e-12, "{strategy:?}: {value}");
    }
    unsafe { qd_matrix_free(m) };
}

#[test]
fn report_round_trip() {
    // diag(1+i+j+k, 1+i+j+k): sdet = 4, qdet = 16, ddet = 2.
    let q = [1.0, 1.0, 1.0, 1.0];
    let z = [0.0, 0.0, 0.0, 0.0];
    let mut comps = Vec::new();
    comps.extend_from_slice(&q);
    comps.extend_from_slice(&z);
    comps.extend_from_slice(&z);
    comps.extend_from_slice(&q);
    let m = make(2, 2, &comps);
    unsafe {
        let mut report = QdDetReport {
            sdet_gauss: 0.0,
            sdet_complexify: 0.0,
            sdet_eigen: 0.0,
            sdet_svd: 0.0,
            sdet_schur_complement: 0.0,
            max_rel_spread: 0.0,
            singular: true,
        };
        assert_eq!(qd_det_report(m, &mut report), QdStatus::QdStatusOk);
        assert!((report.sdet_gauss - 4.0).abs() < 1e-12);
        assert!(report.max_rel_spread <= 1e-6);
        assert!(!report.singular);

        let mut value = 0.0;
        assert_eq!(qd_qdet(m, &mut value), QdStatus::QdStatusOk);
        assert!((value - 16.0).abs() < 1e-10);
        assert_eq!(qd_ddet(m, &mut value), QdStatus::QdStatusOk);
        assert!((value - 2.0).abs() < 1e-12);
        qd_matrix_free(m);
    }
}

#[test]
fn json_round_trip_through_the_boundary() {
    let text = CString::new(r#"{"rows":1,"cols":1,"entries":[[[0,1,0,0]]]}"#).unwrap();
    unsafe {
        let mut m: *mut QdMatrix = ptr::null_mut();
        assert_eq!(
            qd_matrix_parse_json(text.as_ptr(), &mut m),
            QdStatus::QdStatusOk
        );
        let mut serialized: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(qd_matrix_to_json(m, &mut serialized), QdStatus::QdStatusOk);
        let back = CStr::from_ptr(serialized).to_str().unwrap();
        assert!(back.contains("\"rows\":1"));
        let mut m2: *mut QdMatrix = ptr::null_mut();
        let back_c = CString::new(back).unwrap();
        assert_eq!(
            qd_matrix_parse_json(back_c.as_ptr(), &mut m2),
            QdStatus::QdStatusOk
        );
        let mut entry = [0.0; 4];
        assert_eq!(qd_matrix_get(m2, 0, 0, entry.as_mut_ptr()), QdStatus::QdStatusOk);
        assert_eq!(entry, [0.0, 1.0, 0.0, 0.0]);
        qd_string_free(serialized);
        qd_matrix_free(m);
        qd_matrix_free(m2);
    }
}

#[test]
fn parse_error_and_null_status() {
    let text = CString::new("not json").unwrap();
    unsafe {
        let mut m: *mut QdMatrix = ptr::null_mut();
        assert_eq!(
            qd_matrix_parse_json(text.as_ptr(), &mut m),
            QdStatus::QdStatusParseError
        );
        assert_eq!(
            qd_matrix_parse_json(ptr::null(), &mut m),
            QdStatus::QdStatusNullArgument
        );
        let mut value = 0.0;
        assert_eq!(
            qd_sdet(ptr::null(), QdStrategy::QdStrategyGauss, &mut value),
            QdStatus::QdStatusNullArgument
        );
    }
}

#[test]
fn inverse_through_the_boundary() {
    // [[0, i], [j, k]] has the closed-form inverse [[1, -j], [-i, 0]].
    let m = make(
        2,
        2,
        &[
            0.0, 0.0, 0.0, 0.0, /* */ 0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, /* */ 0.0, 0.0, 0.0, 1.0,
        ],
    );
    unsafe {
        let mut inv: *mut QdMatrix = ptr::null_mut();
        assert_eq!(qd_inverse_2x2(m, &mut inv), QdStatus::QdStatusOk);
        let mut entry = [0.0; 4];
        qd_matrix_get(inv, 0, 0, entry.as_mut_ptr());
        assert_eq!(entry, [1.0, 0.0, 0.0, 0.0]);
        qd_matrix_get(inv, 0, 1, entry.as_mut_ptr());
        assert_eq!(entry, [0.0, 0.0, -1.0, 0.0]);
        qd_matrix_get(inv, 1, 1, entry.as_mut_ptr());
        assert_eq!(entry, [0.0, 0.0, 0.0, 0.0]);
        qd_matrix_free(inv);

        let mut inv2: *mut QdMatrix = ptr::null_mut();
        assert_eq!(qd_invert(m, &mut inv2), QdStatus::QdStatusOk);
        qd_matrix_get(inv2, 0, 0, entry.as_mut_ptr());
        assert!((entry[0] - 1.0).abs() < 1e-12);
        qd_matrix_free(inv2);
        qd_matrix_free(m);
    }

    let zero = make(2, 2, &[0.0; 16]);
    unsafe {
        let mut inv: *mut QdMatrix = ptr::null_mut();
        assert_eq!(qd_invert(zero, &mut inv), QdStatus::QdStatusSingular);
        qd_matrix_free(zero);
    }
}

#[test]
fn spectra_through_the_boundary() {
    // diag(i, j): both right eigenvalues are the class of i.
    let m = make(
        2,
        2,
        &[
            0.0, 1.0, 0.0, 0.0, /* */ 0.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, /* */ 0.0, 0.0, 1.0, 0.0,
        ],
    );
    unsafe {
        let mut re = [0.0f64; 2];
        let mut im = [0.0f64; 2];
        assert_eq!(
            qd_right_eigenvalues(m, re.as_mut_ptr(), im.as_mut_ptr()),
            QdStatus::QdStatusOk
        );
        for k in 0..2 {
            assert!(re[k].abs() < 1e-10);
            assert!((im[k] - 1.0).abs() < 1e-10);
        }
        let mut sigma = [0.0f64; 2];
        assert_eq!(qd_singular_values(m, sigma.as_mut_ptr()), QdStatus::QdStatusOk);
        for s in sigma {
            assert!((s - 1.0).abs() < 1e-10);
        }
        qd_matrix_free(m);
    }
}

#[test]
fn hermitian_det_status() {
    // [[1, i], [-i, 2]] is hermitian with real determinant 1.
    let m = make(
        2,
        2,
        &[
            1.0, 0.0, 0.0, 0.0, /* */ 0.0, 1.0, 0.0, 0.0, //
            0.0, -1.0, 0.0, 0.0, /* */ 2.0, 0.0, 0.0, 0.0,
        ],
    );
    unsafe {
        let mut value = 0.0;
        assert_eq!(qd_hermitian_det(m, &mut value), QdStatus::QdStatusOk);
        assert!((value - 1.0).abs() < 1e-10);
        qd_matrix_free(m);
    }
    // Non-hermitian input is refused.
    let m = make(
        1,
        1,
        &[0.0, 1.0, 0.0, 0.0],
    );
    unsafe {
        let mut value = 0.0;
        assert_eq!(qd_hermitian_det(m, &mut value), QdStatus::QdStatusNotHermitian);
        qd_matrix_free(m);
    }
}

#[test]
fn double_det_rectangular() {
    // 2x1 column (1; i): gram = 2, double det = sqrt(2).
    let m = make(
        2,
        1,
        &[1.0, 0.0, 0.0, 0.0, /* */ 0.0, 1.0, 0.0, 0.0],
    );
    unsafe {
        let mut value = 0.0;
        assert_eq!(qd_double_det(m, &mut value), QdStatus::QdStatusOk);
        assert!((value - 2.0_f64.sqrt()).abs() < 1e-10);
        qd_matrix_free(m);
    }
}
