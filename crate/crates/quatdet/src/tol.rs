//! Numerical thresholds used across the crate.
//!
//! Everything here is relative to a problem scale (usually the largest
//! entry norm of the matrix at hand) so that the library behaves the same
//! under global rescaling of its input.

/// A pivot (or matrix entry, where an entrywise convention applies) whose
/// norm is at most this fraction of the reference scale is treated as zero.
pub const PIVOT_ZERO_REL: f64 = 1e-12;

/// Upper edge of the ill-conditioned band for the closed-form 2x2 inverse.
/// Entries with norm in `(PIVOT_ZERO_REL, CLOSED_FORM_BAND_REL] * scale`
/// are too small for the entrywise formulas to stay accurate, but too
/// large for the zero-entry limit conventions; such matrices are inverted
/// by block elimination instead.
pub const CLOSED_FORM_BAND_REL: f64 = 1e-6;

/// Maximum admissible relative spread between the five determinant
/// strategies before a report is considered a failure.
pub const STRATEGY_SPREAD_REL: f64 = 1e-6;

/// A determinant report declares the input singular when every strategy
/// value is at most `SINGULAR_REPORT_REL * scale^n`.
pub const SINGULAR_REPORT_REL: f64 = 1e-9;

/// Spectral-route rank cutoff: an eigenvalue of the Gram matrix below this
/// fraction of the largest one contributes a zero singular value.
pub const GRAM_RANK_REL: f64 = 1e-12;

/// Required residual for an eigenpair: `|M psi - psi lambda| <= tol * |M|`.
pub const EIGENPAIR_RESIDUAL_REL: f64 = 1e-8;

/// Conjugate-pairing residual allowed when folding the spectrum of the
/// complex adjoint back to quaternionic right eigenvalues.
pub const PAIRING_RESIDUAL_REL: f64 = 1e-8;

/// Orthonormality defect allowed for computed unitary factors.
pub const UNITARY_RESIDUAL_ABS: f64 = 1e-10;

/// Reconstruction residual allowed for Schur and SVD factorizations,
/// relative to the input scale.
pub const FACTORIZATION_RESIDUAL_REL: f64 = 1e-8;

/// Default entrywise tolerance for hermitian / unitary structure checks.
pub const STRUCTURE_CHECK_REL: f64 = 1e-10;

/// Relative imaginary contamination allowed in the complex determinant of
/// an adjoint matrix before `NonRealDeterminant` is raised.
pub const NONREAL_DET_REL: f64 = 1e-7;

/// Residual bound for the non-commuting quadratic solver, scaled by
/// `(1 + |alpha|^2) * max(|b|, |e|, |c|)`.
pub const QUADRATIC_RESIDUAL_REL: f64 = 1e-10;

/// Absolute floor under which a quaternion cannot be inverted at all.
pub const ABS_ZERO: f64 = 1e-300;
