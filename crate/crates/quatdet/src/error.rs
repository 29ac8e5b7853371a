//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("division by a zero quaternion")]
    ZeroDivision,

    #[error("quadratic has zero leading coefficient; permute the problem first")]
    DegenerateQuadratic,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("shear indices must differ (both are {0})")]
    IndexEqual(usize),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("bad split index {k} for a {n}x{n} matrix")]
    BadSplitIndex { k: usize, n: usize },

    #[error("eigenvalue iteration failed to converge (matrix size {size})")]
    NoConvergence { size: usize },

    #[error("conjugate pairing of eigenvalues failed: residual {residual:e} exceeds {tol:e}")]
    PairingFailure { residual: f64, tol: f64 },

    #[error("{re}{im:+}i is not an eigenvalue (best eigenvector residual {residual:e})")]
    NotAnEigenvalue { re: f64, im: f64, residual: f64 },

    #[error(
        "determinant of the complex adjoint is not real nonnegative (re {re:e}, im {im:e})"
    )]
    NonRealDeterminant { re: f64, im: f64 },

    #[error(
        "determinant strategies disagree: relative spread {spread:e} exceeds {tol:e} \
         (gauss {values:?})"
    )]
    StrategyDisagreement {
        spread: f64,
        tol: f64,
        /// gauss, complexify, eigen, svd, schur-complement, in that order.
        values: [f64; 5],
    },

    #[error("matrix is not hermitian")]
    NotHermitian,

    #[error(
        "positive-definiteness criteria disagree: quadratic-form {sampled}, \
         eigenvalue {eigen}, principal-minor {minors}"
    )]
    CriteriaDisagreement {
        sampled: bool,
        eigen: bool,
        minors: bool,
    },

    #[error("leading block is singular")]
    SingularLeadingBlock,

    #[error("Schur complement is singular")]
    SingularSchurComplement,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("entry ({i},{j}) is zero; the Hadamard-form inverse is undefined")]
    ZeroEntry { i: usize, j: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
