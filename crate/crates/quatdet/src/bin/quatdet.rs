//! Batch command-line front-end for the quaternionic matrix toolkit.
//!
//! Reads matrices in the JSON format documented in `quatdet::io`, runs one
//! operation, and prints the result either human-readable (17 significant
//! digits) or as JSON. Exit codes: 0 success, 1 verification or numerical
//! failure, 2 parse error, 3 dimension or precondition error, 4 singular
//! input where an inverse was requested.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as Complex;
use serde_json::json;

use quatdet::error::Error;
use quatdet::io;
use quatdet::qdet::{self, Strategy};
use quatdet::quat::fmt_17;
use quatdet::{blockinv, spectral, QMatrix};

#[derive(Parser)]
#[command(
    name = "quatdet",
    version,
    about = "Quaternionic matrices: Study determinants, spectra, and inverses"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Study determinant of a square matrix
    Sdet {
        input: PathBuf,
        /// gauss | complexify | eigen | svd | schur
        #[arg(long, default_value = "gauss")]
        method: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// q-determinant (the Study determinant squared)
    Qdet {
        input: PathBuf,
        #[arg(long, default_value = "gauss")]
        method: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dieudonne determinant (square root of the Study determinant)
    Ddet {
        input: PathBuf,
        #[arg(long, default_value = "gauss")]
        method: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Signed real determinant of a hermitian matrix
    Hdet {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// All five determinant strategies with agreement diagnostics
    Report {
        input: PathBuf,
        /// Override the strategy agreement threshold (default 1e-6)
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Matrix inverse
    Inv {
        input: PathBuf,
        /// schur | gauss | closed2x2
        #[arg(long, default_value = "schur")]
        method: String,
        /// Fixed split index for the schur method (default: recursive halving)
        #[arg(long)]
        split: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Right eigenvalues (canonical complex representatives)
    Eig {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Singular value decomposition
    Svd {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Unitary Schur triangularization
    Schur {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Verify the classical counterexamples and the unitary failure table
    Demo,
    /// Run the five-strategy report over every .json file in a directory
    Verify {
        dir: PathBuf,
        /// Override the strategy agreement threshold (default 1e-6)
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::DimensionMismatch(_)
        | Error::NonSquare { .. }
        | Error::NotHermitian
        | Error::BadSplitIndex { .. }
        | Error::IndexOutOfRange(_)
        | Error::IndexEqual(_)
        | Error::NotAPermutation(_) => 3,
        Error::SingularMatrix
        | Error::SingularLeadingBlock
        | Error::SingularSchurComplement
        | Error::ZeroDivision
        | Error::ZeroEntry { .. } => 4,
        _ => 1,
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, Error> {
    match cmd {
        Cmd::Sdet {
            input,
            method,
            format,
        } => {
            let value = qdet::sdet(&io::read_matrix(&input)?, method.parse::<Strategy>()?)?;
            emit_scalar("sdet", &method, value, format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Qdet {
            input,
            method,
            format,
        } => {
            let s = qdet::sdet(&io::read_matrix(&input)?, method.parse::<Strategy>()?)?;
            emit_scalar("qdet", &method, s * s, format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Ddet {
            input,
            method,
            format,
        } => {
            let s = qdet::sdet(&io::read_matrix(&input)?, method.parse::<Strategy>()?)?;
            emit_scalar("ddet", &method, s.sqrt(), format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Hdet { input, format } => {
            let value = qdet::hermitian_det(&io::read_matrix(&input)?)?;
            emit_scalar("hdet", "eigen", value, format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Report { input, tol, format } => {
            let m = io::read_matrix(&input)?;
            let tol = tol.unwrap_or(quatdet::tol::STRATEGY_SPREAD_REL);
            match qdet::det_report_with_tol(&m, tol) {
                Ok(report) => {
                    emit_report(&report, format);
                    Ok(ExitCode::SUCCESS)
                }
                Err(Error::StrategyDisagreement {
                    spread,
                    tol,
                    values,
                }) => {
                    let report = qdet::DetReport {
                        sdet_gauss: values[0],
                        sdet_complexify: values[1],
                        sdet_eigen: values[2],
                        sdet_svd: values[3],
                        sdet_schur: values[4],
                        max_rel_spread: spread,
                        singular: false,
                    };
                    emit_report(&report, format);
                    eprintln!("error: strategies disagree: spread {spread:e} > {tol:e}");
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e),
            }
        }
        Cmd::Inv {
            input,
            method,
            split,
            format,
        } => {
            let m = io::read_matrix(&input)?;
            if split.is_some() && method != "schur" {
                return Err(Error::Parse(
                    "--split only applies to --method schur".into(),
                ));
            }
            let inv = match method.as_str() {
                "schur" => match split {
                    Some(k) => blockinv::block_inverse(&m, k)?,
                    None => blockinv::invert(&m)?,
                },
                "gauss" => blockinv::invert_gauss(&m)?,
                "closed2x2" => blockinv::inverse_2x2(&m)?,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown inverse method {other:?} (expected schur|gauss|closed2x2)"
                    )))
                }
            };
            emit_matrix(&inv, format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Eig { input, format } => {
            let spectrum = spectral::right_eigenvalues(&io::read_matrix(&input)?)?;
            match format {
                Format::Text => {
                    for v in &spectrum.values {
                        println!("{}", fmt_complex(v));
                    }
                }
                Format::Json => {
                    let values: Vec<[f64; 2]> =
                        spectrum.values.iter().map(|v| [v.re, v.im]).collect();
                    println!("{}", json!({ "op": "eig", "values": values }));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Svd { input, format } => {
            let f = spectral::svd(&io::read_matrix(&input)?)?;
            match format {
                Format::Text => {
                    for s in &f.sigma {
                        println!("{}", fmt_17(*s));
                    }
                }
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "op": "svd",
                            "sigma": f.sigma,
                            "u": io::matrix_to_value(&f.u),
                            "v": io::matrix_to_value(&f.v),
                        })
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Schur { input, format } => {
            let f = spectral::schur(&io::read_matrix(&input)?)?;
            match format {
                Format::Text => {
                    println!("t:");
                    print_matrix(&f.t);
                    println!("u:");
                    print_matrix(&f.u);
                }
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "op": "schur",
                            "t": io::matrix_to_value(&f.t),
                            "u": io::matrix_to_value(&f.u),
                        })
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Demo => Ok(run_demo()),
        Cmd::Verify { dir, tol } => run_verify(&dir, tol),
    }
}

fn emit_scalar(op: &str, method: &str, value: f64, format: Format) {
    match format {
        Format::Text => println!("{}", fmt_17(value)),
        Format::Json => println!(
            "{}",
            json!({ "op": op, "method": method, "value": value })
        ),
    }
}

fn emit_matrix(m: &QMatrix, format: Format) {
    match format {
        Format::Text => print_matrix(m),
        Format::Json => println!("{}", io::matrix_to_json(m)),
    }
}

fn print_matrix(m: &QMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
        println!("{}", row.join("  "));
    }
}

fn fmt_complex(z: &Complex) -> String {
    let sign = if z.im.is_sign_negative() { "-" } else { "+" };
    format!("{}{}{}i", fmt_17(z.re), sign, fmt_17(z.im.abs()))
}

fn emit_report(report: &qdet::DetReport, format: Format) {
    match format {
        Format::Text => {
            println!("sdet[gauss]      = {}", fmt_17(report.sdet_gauss));
            println!("sdet[complexify] = {}", fmt_17(report.sdet_complexify));
            println!("sdet[eigen]      = {}", fmt_17(report.sdet_eigen));
            println!("sdet[svd]        = {}", fmt_17(report.sdet_svd));
            println!("sdet[schur]      = {}", fmt_17(report.sdet_schur));
            println!("max relative spread = {}", fmt_17(report.max_rel_spread));
            println!("singular = {}", report.singular);
        }
        Format::Json => {
            println!("{}", serde_json::to_string(report).expect("serializable"));
        }
    }
}

fn run_demo() -> ExitCode {
    let mut all_ok = true;
    let mut check = |label: &str, ok: bool| {
        println!("{label}: {}", if ok { "OK" } else { "FAIL" });
        all_ok &= ok;
    };

    let (_, _, _, report) = qdet::extension_counterexample();
    check("SM = NS", report.commutation_residual == 0.0);
    println!(
        "  det M = {}{:+}i, det N = {}{:+}i",
        report.det_m.0, report.det_m.1, report.det_n.0, report.det_n.1
    );
    check("Re det M != Re det N", report.real_parts_differ);

    let (a, b) = qdet::vanishing_expression_unitaries();
    let table = |m: &QMatrix| -> Vec<f64> {
        qdet::wrong2_expressions(m)
            .expect("2x2 by construction")
            .iter()
            .map(|q| q.norm())
            .collect()
    };
    let norms_a = table(&a);
    let norms_b = table(&b);
    println!("  |ad-cb| |ad-bc| |da-cb| |da-bc|");
    println!(
        "  A: {}",
        norms_a.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(" ")
    );
    println!(
        "  B: {}",
        norms_b.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(" ")
    );
    let vanish_a = norms_a.iter().filter(|v| **v <= 1e-14).count();
    let vanish_b = norms_b.iter().filter(|v| **v <= 1e-14).count();
    check("A: exactly 2 of 4 expressions vanish", vanish_a == 2);
    check("B: 4 of 4 expressions vanish", vanish_b == 4);

    let unit_ok = |m: &QMatrix| -> bool {
        m.is_unitary(1e-12).unwrap_or(false)
            && qdet::det_report(m)
                .map(|r| r.values().iter().all(|v| (v - 1.0).abs() <= 1e-12))
                .unwrap_or(false)
    };
    check("A and B unitary with Sdet = 1 by all strategies", unit_ok(&a) && unit_ok(&b));

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_verify(dir: &Path, tol: Option<f64>) -> Result<ExitCode, Error> {
    let tol = tol.unwrap_or(quatdet::tol::STRATEGY_SPREAD_REL);
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Parse(format!(
            "no .json matrix files in {}",
            dir.display()
        )));
    }
    let mut parse_failures = 0usize;
    let mut violations = 0usize;
    for path in &paths {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        match io::read_matrix(path).and_then(|m| qdet::det_report_with_tol(&m, tol)) {
            Ok(report) => {
                println!(
                    "{name}: ok (spread {}, singular {})",
                    fmt_17(report.max_rel_spread),
                    report.singular
                );
            }
            Err(e @ Error::Parse(_)) => {
                println!("{name}: PARSE FAIL ({e})");
                parse_failures += 1;
            }
            Err(e) => {
                println!("{name}: FAIL ({e})");
                violations += 1;
            }
        }
    }
    println!(
        "{} files, {} failures",
        paths.len(),
        parse_failures + violations
    );
    if parse_failures > 0 {
        Ok(ExitCode::from(2))
    } else if violations > 0 {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
