//! The Study determinant by five independent strategies, its relatives
//! (q-determinant, Dieudonne determinant, hermitian real determinant,
//! double determinant), and executable forms of the classical
//! impossibility results for quaternionic determinants.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::QMatrix;
use crate::quat::{self, Quaternion};
use crate::spectral;
use crate::tol;

/// Strategy selector for [`sdet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Quaternionic Gaussian elimination; product of pivot norms.
    Gauss,
    /// Square root of the complex determinant of the adjoint.
    Complexify,
    /// Product of right-eigenvalue norms.
    Eigen,
    /// Product of singular values.
    Svd,
    /// Scalar-pivot Schur-complement recursion.
    SchurComplement,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Gauss,
        Strategy::Complexify,
        Strategy::Eigen,
        Strategy::Svd,
        Strategy::SchurComplement,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Gauss => "gauss",
            Strategy::Complexify => "complexify",
            Strategy::Eigen => "eigen",
            Strategy::Svd => "svd",
            Strategy::SchurComplement => "schur",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "gauss" => Ok(Strategy::Gauss),
            "complexify" => Ok(Strategy::Complexify),
            "eigen" => Ok(Strategy::Eigen),
            "svd" => Ok(Strategy::Svd),
            "schur" => Ok(Strategy::SchurComplement),
            other => Err(Error::Parse(format!(
                "unknown strategy {other:?} (expected gauss|complexify|eigen|svd|schur)"
            ))),
        }
    }
}

/// Per-strategy Study determinant values with agreement diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetReport {
    pub sdet_gauss: f64,
    pub sdet_complexify: f64,
    pub sdet_eigen: f64,
    pub sdet_svd: f64,
    pub sdet_schur: f64,
    /// `(max - min) / max` over the five values; zero when singular.
    pub max_rel_spread: f64,
    /// True when every strategy value is below the singular threshold
    /// `SINGULAR_REPORT_REL * scale^n`.
    pub singular: bool,
}

impl DetReport {
    /// The q-determinant derived from the elimination value.
    pub fn qdet(&self) -> f64 {
        self.sdet_gauss.powi(2)
    }

    /// The Dieudonne determinant derived from the elimination value.
    pub fn ddet(&self) -> f64 {
        self.sdet_gauss.sqrt()
    }

    pub fn values(&self) -> [f64; 5] {
        [
            self.sdet_gauss,
            self.sdet_complexify,
            self.sdet_eigen,
            self.sdet_svd,
            self.sdet_schur,
        ]
    }
}

// ---------------------------------------------------------------------------
// The five strategies
// ---------------------------------------------------------------------------

/// Study determinant by quaternionic Gaussian elimination with partial
/// pivoting by entry norm: the product of the pivot norms. Row swaps are
/// determinant-neutral; a numerically zero pivot column makes the result 0.
pub fn sdet_gauss(m: &QMatrix) -> Result<f64> {
    let n = m.require_square()?;
    let mut work = m.clone();
    let mut det = 1.0f64;
    for k in 0..n {
        // Largest remaining entry norm, the reference scale for this step.
        let mut block_max = 0.0f64;
        for i in k..n {
            for j in k..n {
                block_max = block_max.max(work[(i, j)].norm());
            }
        }
        let mut pivot_row = k;
        let mut pivot_norm = work[(k, k)].norm();
        for i in k + 1..n {
            let norm = work[(i, k)].norm();
            if norm > pivot_norm {
                pivot_norm = norm;
                pivot_row = i;
            }
        }
        if pivot_norm <= tol::PIVOT_ZERO_REL * block_max {
            return Ok(0.0);
        }
        work.swap_rows(k, pivot_row);
        let pivot_inv = work[(k, k)].inverse()?;
        for i in k + 1..n {
            let factor = work[(i, k)] * pivot_inv;
            if factor == quat::ZERO {
                continue;
            }
            for j in k..n {
                let sub = factor * work[(k, j)];
                work[(i, j)] -= sub;
            }
        }
        det *= pivot_norm;
    }
    Ok(det)
}

/// Study determinant as the square root of the complex determinant of the
/// adjoint matrix `Z[M]`, computed by LU with partial pivoting. The complex
/// determinant must come out real and nonnegative; a violation indicates a
/// broken adjoint embedding and is reported as an error.
pub fn sdet_complexify(m: &QMatrix) -> Result<f64> {
    m.require_square()?;
    let lu = m.complexify().lu()?;
    let det = lu.det();
    let magnitude = lu.det_magnitude();
    // A numerically singular adjoint carries no phase information; the
    // reality check applies only above the noise floor.
    let (min_pivot, max_pivot) = lu.pivot_extrema();
    let noise = min_pivot <= tol::PIVOT_ZERO_REL * max_pivot;
    if !noise && (det.re <= 0.0 || det.im.abs() > tol::NONREAL_DET_REL * magnitude) {
        return Err(Error::NonRealDeterminant {
            re: det.re,
            im: det.im,
        });
    }
    Ok(magnitude.sqrt())
}

/// Study determinant as the product of right-eigenvalue norms.
pub fn sdet_eigen(m: &QMatrix) -> Result<f64> {
    let spectrum = spectral::right_eigenvalues(m)?;
    Ok(spectrum.values.iter().map(|l| l.norm()).product())
}

/// Study determinant as the product of singular values.
pub fn sdet_svd(m: &QMatrix) -> Result<f64> {
    m.require_square()?;
    Ok(spectral::singular_values(m)?.iter().product())
}

/// Study determinant by the scalar Schur-complement recursion
/// `Sdet(M) = |a| Sdet(D - C a^{-1} B)` with the pivot `a` brought to the
/// leading slot by (determinant-neutral) row and column permutations,
/// chosen of maximal norm.
pub fn sdet_schur_complement(m: &QMatrix) -> Result<f64> {
    let n = m.require_square()?;
    let mut block = m.clone();
    let mut det = 1.0f64;
    for _step in 0..n {
        let size = block.rows();
        let mut best = (0usize, 0usize, 0.0f64);
        for i in 0..size {
            for j in 0..size {
                let norm = block[(i, j)].norm();
                if norm > best.2 {
                    best = (i, j, norm);
                }
            }
        }
        let (pi, pj, pivot_norm) = best;
        if pivot_norm <= tol::ABS_ZERO {
            return Ok(0.0);
        }
        det *= pivot_norm;
        if size == 1 {
            break;
        }
        block.swap_rows(0, pi);
        block.swap_cols(0, pj);
        let a_inv = block[(0, 0)].inverse()?;
        let next = QMatrix::from_fn(size - 1, size - 1, |i, j| {
            block[(i + 1, j + 1)] - block[(i + 1, 0)] * a_inv * block[(0, j + 1)]
        });
        block = next;
    }
    Ok(det)
}

/// Dispatches to one strategy.
pub fn sdet(m: &QMatrix, strategy: Strategy) -> Result<f64> {
    match strategy {
        Strategy::Gauss => sdet_gauss(m),
        Strategy::Complexify => sdet_complexify(m),
        Strategy::Eigen => sdet_eigen(m),
        Strategy::Svd => sdet_svd(m),
        Strategy::SchurComplement => sdet_schur_complement(m),
    }
}

/// Runs all five strategies and checks their agreement at the default
/// spread tolerance [`tol::STRATEGY_SPREAD_REL`].
pub fn det_report(m: &QMatrix) -> Result<DetReport> {
    det_report_with_tol(m, tol::STRATEGY_SPREAD_REL)
}

/// Runs all five strategies; errors with `StrategyDisagreement` when the
/// relative spread exceeds `spread_tol` on a nonsingular input.
pub fn det_report_with_tol(m: &QMatrix, spread_tol: f64) -> Result<DetReport> {
    let n = m.require_square()?;
    let report = det_report_unchecked(m, n)?;
    if !report.singular && report.max_rel_spread > spread_tol {
        return Err(Error::StrategyDisagreement {
            spread: report.max_rel_spread,
            tol: spread_tol,
            values: report.values(),
        });
    }
    Ok(report)
}

fn det_report_unchecked(m: &QMatrix, n: usize) -> Result<DetReport> {
    let values = [
        sdet_gauss(m)?,
        sdet_complexify(m)?,
        sdet_eigen(m)?,
        sdet_svd(m)?,
        sdet_schur_complement(m)?,
    ];
    let max = values.iter().copied().fold(0.0f64, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = m.norm_max();
    let singular = max <= tol::SINGULAR_REPORT_REL * scale.powi(n as i32);
    let max_rel_spread = if singular || max == 0.0 {
        0.0
    } else {
        (max - min) / max
    };
    Ok(DetReport {
        sdet_gauss: values[0],
        sdet_complexify: values[1],
        sdet_eigen: values[2],
        sdet_svd: values[3],
        sdet_schur: values[4],
        max_rel_spread,
        singular,
    })
}

// ---------------------------------------------------------------------------
// Relatives of the Study determinant
// ---------------------------------------------------------------------------

/// q-determinant `det Z[M] = Sdet^2`.
pub fn qdet(m: &QMatrix) -> Result<f64> {
    Ok(sdet_gauss(m)?.powi(2))
}

/// Dieudonne determinant `Sdet^{1/2}`.
pub fn ddet(m: &QMatrix) -> Result<f64> {
    Ok(sdet_gauss(m)?.sqrt())
}

/// Real determinant of a hermitian matrix: the signed product of its (real)
/// right eigenvalues. Unlike the Study determinant it keeps the sign, and
/// it is not multiplicative.
pub fn hermitian_det(h: &QMatrix) -> Result<f64> {
    if !h.is_hermitian(tol::STRUCTURE_CHECK_REL)? {
        return Err(Error::NotHermitian);
    }
    let spectrum = spectral::right_eigenvalues(h)?;
    Ok(spectrum.values.iter().map(|l| l.re).product())
}

/// Positive definiteness of a hermitian matrix by three equivalent
/// criteria, all evaluated and required to agree:
///
/// 1. positivity of the quadratic form `x^+ H x` on sampled unit vectors,
/// 2. positivity of every eigenvalue,
/// 3. positivity of every leading-principal-minor real determinant.
pub fn is_positive_definite(h: &QMatrix) -> Result<bool> {
    let n = h.require_square()?;
    if !h.is_hermitian(tol::STRUCTURE_CHECK_REL)? {
        return Err(Error::NotHermitian);
    }

    // Route 1: sampled quadratic forms. The sampler is fixed-seeded so the
    // whole function stays deterministic.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5de7_0001);
    let mut sampled = true;
    for _ in 0..64 {
        let x = random_unit_column(n, &mut rng);
        let form = x.adjoint().matmul(&h.matmul(&x)?)?[(0, 0)];
        if form.re() <= 0.0 {
            sampled = false;
            break;
        }
    }

    // Route 2: eigenvalues.
    let spectrum = spectral::right_eigenvalues(h)?;
    let eigen = spectrum.values.iter().all(|l| l.re > 0.0);

    // Route 3: leading principal minors.
    let mut minors = true;
    for k in 1..=n {
        let minor = h.leading_minor(k)?;
        let spec = spectral::right_eigenvalues(&minor)?;
        let det: f64 = spec.values.iter().map(|l| l.re).product();
        if det <= 0.0 {
            minors = false;
            break;
        }
    }

    if sampled == eigen && eigen == minors {
        Ok(eigen)
    } else {
        Err(Error::CriteriaDisagreement {
            sampled,
            eigen,
            minors,
        })
    }
}

fn random_unit_column(n: usize, rng: &mut impl Rng) -> QMatrix {
    loop {
        let x = QMatrix::random(n, 1, rng);
        let norm = x.norm_fro();
        if norm > 0.1 {
            return x.scale(1.0 / norm);
        }
    }
}

/// Double determinant of a possibly rectangular matrix: the square root of
/// the real determinant of the Gram matrix taken on the smaller side, which
/// equals `sqrt(|M^+ M|_r)` whenever that quantity is not forced to vanish
/// by shape (square and tall inputs) and equals the product of the singular
/// values for every shape. Coincides with the Study determinant on square
/// inputs.
pub fn double_det(m: &QMatrix) -> Result<f64> {
    let gram = if m.cols() <= m.rows() {
        m.adjoint().matmul(m)?
    } else {
        m.matmul(&m.adjoint())?
    };
    let spectrum = spectral::right_eigenvalues(&gram)?;
    let det: f64 = spectrum.values.iter().map(|l| l.re).product();
    Ok(det.max(0.0).sqrt())
}

/// The literal quantity `|M^+ M|_r`. For matrices with more columns than
/// rows the Gram matrix is rank deficient and this vanishes identically;
/// [`double_det`] keeps a nonzero value there by switching sides.
pub fn double_det_squared(m: &QMatrix) -> Result<f64> {
    let gram = m.adjoint().matmul(m)?;
    let spectrum = spectral::right_eigenvalues(&gram)?;
    Ok(spectrum.values.iter().map(|l| l.re).product())
}

// ---------------------------------------------------------------------------
// Negative results, machine-checkable
// ---------------------------------------------------------------------------

/// The four candidate entrywise "determinants" of a 2x2 matrix
/// `[[a, b], [c, d]]`: `ad - cb`, `ad - bc`, `da - cb`, `da - bc`. None of
/// them carries invertibility information; they are exposed so their
/// failure can be demonstrated.
pub fn wrong2_expressions(m: &QMatrix) -> Result<[Quaternion; 4]> {
    let n = m.require_square()?;
    if n != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected 2x2, got {n}x{n}"
        )));
    }
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    Ok([a * d - c * b, a * d - b * c, d * a - c * b, d * a - b * c])
}

/// The unitary pair on which the four entrywise expressions fail in two
/// different ways: for the first, exactly two of the four vanish; for the
/// second, all four vanish.
pub fn vanishing_expression_unitaries() -> (QMatrix, QMatrix) {
    let s = 1.0 / 2.0_f64.sqrt();
    let a = QMatrix::from_rows(vec![
        vec![quat::ONE * s, quat::I * s],
        vec![quat::J * s, quat::K * s],
    ])
    .expect("static shape");
    let b = QMatrix::from_rows(vec![
        vec![quat::I * s, quat::J * s],
        vec![quat::J * s, quat::I * s],
    ])
    .expect("static shape");
    (a, b)
}

/// Outcome of [`extension_counterexample`].
#[derive(Debug, Clone, Serialize)]
pub struct ExtensionCounterexample {
    /// Largest entry norm of `SM - NS`; exactly zero here.
    pub commutation_residual: f64,
    /// Complex determinant of the first diagonal witness.
    pub det_m: (f64, f64),
    /// Complex determinant of the second diagonal witness.
    pub det_n: (f64, f64),
    /// Real parts differ, so no quaternion-valued multiplicative functional
    /// can restrict to the complex determinant.
    pub real_parts_differ: bool,
}

/// Builds the diagonal witnesses `M = diag(1+i, i)`, `N = diag(1+i, -i)`,
/// `S = diag(1, j)` with `SM = NS`, whence any multiplicative functional
/// would force `F[M]` similar to `F[N]` while the complex determinants have
/// distinct real parts. Returns the three matrices and the checked report.
pub fn extension_counterexample() -> (QMatrix, QMatrix, QMatrix, ExtensionCounterexample) {
    let m = QMatrix::diag(&[quat::ONE + quat::I, quat::I]);
    let n = QMatrix::diag(&[quat::ONE + quat::I, -quat::I]);
    let s = QMatrix::diag(&[quat::ONE, quat::J]);

    let sm = s.matmul(&m).expect("static shape");
    let ns = n.matmul(&s).expect("static shape");
    let commutation_residual = sm.max_abs_diff(&ns);

    let det2 = |x: &QMatrix| -> Complex {
        // Entries are complex-embedded; the ordinary 2x2 determinant.
        let (z1, _) = x[(0, 0)].complex_parts();
        let (z4, _) = x[(1, 1)].complex_parts();
        let (z2, _) = x[(0, 1)].complex_parts();
        let (z3, _) = x[(1, 0)].complex_parts();
        z1 * z4 - z2 * z3
    };
    let dm = det2(&m);
    let dn = det2(&n);

    let report = ExtensionCounterexample {
        commutation_residual,
        det_m: (dm.re, dm.im),
        det_n: (dn.re, dn.im),
        real_parts_differ: dm.re != dn.re,
    };
    (m, n, s, report)
}
