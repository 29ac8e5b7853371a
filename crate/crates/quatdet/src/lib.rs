//! Quaternionic dense linear algebra.
//!
//! The crate provides quaternion scalars and matrices, the complex adjoint
//! embedding, right-eigenvalue extraction, quaternionic Schur and singular
//! value decompositions, Schur-complement block inversion, and the Study
//! determinant computed by five independent, mutually cross-checking
//! strategies (Gaussian elimination, complex adjoint, eigenvalue product,
//! singular-value product, and Schur-complement recursion).
//!
//! Quick tour:
//!
//! ```
//! use quatdet::{qdet, QMatrix, Quaternion};
//!
//! let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
//! let m = QMatrix::scalar(2, q);
//! let report = qdet::det_report(&m).unwrap();
//! assert!((report.sdet_gauss - 4.0).abs() < 1e-12);
//! assert!(report.max_rel_spread < 1e-6);
//! ```
//!
//! All values are immutable plain data and every operation is pure, so
//! everything can be shared and called freely across threads.

pub mod blockinv;
pub mod cmat;
pub mod error;
pub mod io;
pub mod qdet;
pub mod qmat;
pub mod quat;
pub mod spectral;
pub mod tol;

pub use cmat::CMatrix;
pub use error::{Error, Result};
pub use qmat::QMatrix;
pub use quat::Quaternion;
pub use spectral::{SchurForm, Spectrum, SvdForm};

/// Complex scalar used throughout (the `{1, i}` plane of the quaternions).
pub type Complex = num_complex::Complex64;
