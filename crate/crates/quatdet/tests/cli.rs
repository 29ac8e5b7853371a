//! End-to-end tests of the command-line interface: output values, formats,
//! determinism, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use quatdet::io;
use quatdet::QMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quatdet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_matrix(dir: &Path, name: &str, m: &QMatrix) -> String {
    let path = dir.join(name);
    std::fs::write(&path, io::matrix_to_json(m)).unwrap();
    path.to_string_lossy().into_owned()
}

fn parse_scalar(out: &Output) -> f64 {
    stdout(out).trim().parse::<f64>().expect("scalar output")
}

#[test]
fn sdet_of_identity_prints_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_matrix(dir.path(), "id.json", &QMatrix::identity(3));
    let out = run(&["sdet", &path]);
    assert!(out.status.success());
    assert_eq!(parse_scalar(&out), 1.0);
}

#[test]
fn all_methods_agree_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let m = QMatrix::random(4, 4, &mut rng);
    let path = write_matrix(dir.path(), "m.json", &m);
    let values: Vec<f64> = ["gauss", "complexify", "eigen", "svd", "schur"]
        .iter()
        .map(|method| parse_scalar(&run(&["sdet", &path, "--method", method])))
        .collect();
    for v in &values {
        assert!((v - values[0]).abs() <= 1e-6 * values[0]);
    }
    // qdet and ddet are powers of sdet.
    let s = values[0];
    let q = parse_scalar(&run(&["qdet", &path]));
    let d = parse_scalar(&run(&["ddet", &path]));
    assert!((q - s * s).abs() <= 1e-9 * (1.0 + s * s));
    assert!((d - s.sqrt()).abs() <= 1e-12 * (1.0 + s.sqrt()));
}

#[test]
fn report_json_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    let m = QMatrix::random(3, 3, &mut rng);
    let path = write_matrix(dir.path(), "m.json", &m);
    let out = run(&["report", &path, "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(v["sdet_gauss"].as_f64().unwrap() > 0.0);
    assert!(v["max_rel_spread"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["singular"], serde_json::Value::Bool(false));
}

#[test]
fn deterministic_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let m = QMatrix::random(4, 4, &mut rng);
    let path = write_matrix(dir.path(), "m.json", &m);
    for args in [
        vec!["report", path.as_str()],
        vec!["eig", path.as_str()],
        vec!["svd", path.as_str()],
        vec!["schur", path.as_str()],
        vec!["inv", path.as_str()],
        vec!["demo"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {args:?}");
        assert_eq!(a.status, b.status);
    }
}

#[test]
fn inverse_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(74);
    let m = QMatrix::random(3, 3, &mut rng);
    let path = write_matrix(dir.path(), "m.json", &m);
    let out = run(&["inv", &path, "--format", "json"]);
    assert!(out.status.success());
    // The JSON output is itself a valid matrix file.
    let inv = io::matrix_from_json(stdout(&out).trim()).unwrap();
    let prod = m.matmul(&inv).unwrap();
    assert!(prod.max_abs_diff(&QMatrix::identity(3)) <= 1e-9 * inv.norm_max().max(1.0));

    // Methods agree.
    let out_gauss = run(&["inv", &path, "--method", "gauss", "--format", "json"]);
    let inv_gauss = io::matrix_from_json(stdout(&out_gauss).trim()).unwrap();
    assert!(inv.max_abs_diff(&inv_gauss) <= 1e-8 * inv.norm_max().max(1.0));

    // Fixed split.
    let out_split = run(&["inv", &path, "--split", "1", "--format", "json"]);
    assert!(out_split.status.success());
    let inv_split = io::matrix_from_json(stdout(&out_split).trim()).unwrap();
    assert!(inv.max_abs_diff(&inv_split) <= 1e-8 * inv.norm_max().max(1.0));
}

#[test]
fn closed2x2_method_and_dimension_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(75);
    let m2 = QMatrix::random(2, 2, &mut rng);
    let p2 = write_matrix(dir.path(), "m2.json", &m2);
    let out = run(&["inv", &p2, "--method", "closed2x2", "--format", "json"]);
    assert!(out.status.success());

    let m3 = QMatrix::random(3, 3, &mut rng);
    let p3 = write_matrix(dir.path(), "m3.json", &m3);
    let out = run(&["inv", &p3, "--method", "closed2x2"]);
    assert_eq!(out.status.code(), Some(3), "dimension error must exit 3");
}

#[test]
fn parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"rows\": 1,").unwrap();
    let out = run(&["sdet", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // Empty entries array.
    let path2 = dir.path().join("empty.json");
    std::fs::write(&path2, r#"{"rows":0,"cols":0,"entries":[]}"#).unwrap();
    let out = run(&["sdet", path2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_square_exits_3_and_singular_inverse_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(76);
    let rect = QMatrix::random(2, 3, &mut rng);
    let pr = write_matrix(dir.path(), "rect.json", &rect);
    let out = run(&["sdet", &pr]);
    assert_eq!(out.status.code(), Some(3));

    let pz = write_matrix(dir.path(), "zero.json", &QMatrix::zeros(2, 2));
    let out = run(&["inv", &pz]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn hdet_requires_hermitian() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let g = QMatrix::random(3, 3, &mut rng);
    let h = &g + &g.adjoint();
    let ph = write_matrix(dir.path(), "h.json", &h);
    let out = run(&["hdet", &ph]);
    assert!(out.status.success());

    let pm = write_matrix(dir.path(), "m.json", &g);
    let out = run(&["hdet", &pm]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn demo_reports_all_checks() {
    let out = run(&["demo"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for needle in [
        "SM = NS: OK",
        "Re det M != Re det N: OK",
        "A: exactly 2 of 4 expressions vanish: OK",
        "B: 4 of 4 expressions vanish: OK",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
    }
}

#[test]
fn verify_walks_a_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for (i, n) in [2usize, 3, 4].iter().enumerate() {
        write_matrix(
            dir.path(),
            &format!("m{i}.json"),
            &QMatrix::random(*n, *n, &mut rng),
        );
    }
    write_matrix(dir.path(), "id.json", &QMatrix::identity(2));
    let out = run(&["verify", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.matches(": ok").count(), 4, "{text}");
    assert!(text.contains("4 files, 0 failures"));

    // A broken file flips the exit code to 2.
    std::fs::write(dir.path().join("zz_broken.json"), "not json").unwrap();
    let out = run(&["verify", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("PARSE FAIL"));
}

#[test]
fn eig_output_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    let m = QMatrix::random(3, 3, &mut rng);
    let path = write_matrix(dir.path(), "m.json", &m);
    let out = run(&["eig", &path, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let values = v["values"].as_array().unwrap();
    let spec = quatdet::spectral::right_eigenvalues(&m).unwrap();
    assert_eq!(values.len(), 3);
    for (got, want) in values.iter().zip(&spec.values) {
        let re = got[0].as_f64().unwrap();
        let im = got[1].as_f64().unwrap();
        assert!((re - want.re).abs() <= 1e-12);
        assert!((im - want.im).abs() <= 1e-12);
    }
}
