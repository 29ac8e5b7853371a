//! Spectral machinery: the complex eigenvalue kernel, right eigenvalues of
//! quaternionic matrices through the complex adjoint, unitary Schur
//! triangularization, and the singular value decomposition.
//!
//! The eigenvalue kernel is a Hessenberg reduction followed by explicitly
//! shifted QR iteration with the Wilkinson shift. No balancing; inputs are
//! desk scale.

use num_complex::Complex64 as Complex;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::qmat::QMatrix;
use crate::quat::{self, Quaternion};
use crate::tol;

/// Right eigenvalues of a square quaternionic matrix, one canonical
/// complex representative (nonnegative imaginary part) per similarity
/// class, sorted descending by `(re, im)`. Multiplicities repeat.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<Complex>,
}

/// Unitary triangularization `M = U^+ T U`.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub u: QMatrix,
    pub t: QMatrix,
}

/// Singular value decomposition `M = U Sigma V` with `U`, `V` unitary and
/// `sigma` nonnegative, non-increasing, of length `min(rows, cols)`.
#[derive(Debug, Clone)]
pub struct SvdForm {
    pub u: QMatrix,
    pub sigma: Vec<f64>,
    pub v: QMatrix,
}

// ---------------------------------------------------------------------------
// Complex eigenvalue kernel
// ---------------------------------------------------------------------------

/// All eigenvalues of a square complex matrix, in no particular order.
pub fn complex_eigenvalues(z: &CMatrix) -> Result<Vec<Complex>> {
    if !z.is_square() {
        return Err(Error::NonSquare {
            rows: z.rows(),
            cols: z.cols(),
        });
    }
    let mut h = z.clone();
    hessenberg_in_place(&mut h);
    qr_eigenvalues(h)
}

/// Householder reduction to upper Hessenberg form, in place.
fn hessenberg_in_place(h: &mut CMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let m = n - k - 1; // length of the column tail below the diagonal
        let mut v: Vec<Complex> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex::new(1.0, 0.0)
        };
        let alpha = -phase * norm_x;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // Left: rows k+1..n over columns k..n.
        for j in k..n {
            let mut s = Complex::new(0.0, 0.0);
            for i in 0..m {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            s *= tau;
            for i in 0..m {
                let sub = v[i] * s;
                h[(k + 1 + i, j)] -= sub;
            }
        }
        // Right: columns k+1..n over all rows.
        for i in 0..n {
            let mut s = Complex::new(0.0, 0.0);
            for j in 0..m {
                s += h[(i, k + 1 + j)] * v[j];
            }
            s *= tau;
            for j in 0..m {
                let sub = s * v[j].conj();
                h[(i, k + 1 + j)] -= sub;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of the two-by-two `[[a, b], [c, d]]`.
fn eig2(a: Complex, b: Complex, c: Complex, d: Complex) -> (Complex, Complex) {
    let mid = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let s = disc.sqrt();
    (mid + s, mid - s)
}

/// Shifted QR iteration on an upper Hessenberg matrix; eigenvalues only.
fn qr_eigenvalues(mut h: CMatrix) -> Result<Vec<Complex>> {
    let n = h.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let fro = h.norm_fro();
    let mut eigs = Vec::with_capacity(n);
    let budget = 100 * n;
    let mut steps = 0usize;
    let mut local = 0usize;
    let mut hi = n - 1;
    loop {
        // Zero out negligible subdiagonal entries and locate the active
        // window [lo, hi].
        let mut lo = hi;
        while lo > 0 {
            let mag = h[(lo, lo - 1)].norm();
            let mut thresh = f64::EPSILON * (h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm());
            if thresh == 0.0 {
                thresh = f64::EPSILON * fro;
            }
            if mag <= thresh {
                h[(lo, lo - 1)] = Complex::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eigs.push(h[(hi, hi)]);
            local = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigs.push(l1);
            eigs.push(l2);
            local = 0;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            continue;
        }

        steps += 1;
        local += 1;
        if steps > budget {
            return Err(Error::NoConvergence { size: n });
        }
        let shift = if local.is_multiple_of(20) {
            // Exceptional shift to break symmetric cycles.
            let kick = h[(hi, hi - 1)].norm() + h[(hi - 1, hi - 2)].norm();
            h[(hi, hi)] + Complex::new(0.75 * kick, 0.0)
        } else {
            let (l1, l2) = eig2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            if (l1 - h[(hi, hi)]).norm() <= (l2 - h[(hi, hi)]).norm() {
                l1
            } else {
                l2
            }
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(eigs)
}

/// One explicit shifted QR sweep on the window `[lo, hi]` of a Hessenberg
/// matrix: `H - mu I = Q R`, then `H <- R Q + mu I`.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, mu: Complex) {
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rots: Vec<(f64, Complex)> = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let f = h[(i, i)];
        let g = h[(i + 1, i)];
        let (c, s) = givens(f, g);
        // Rows i, i+1 over columns i..=hi.
        for j in i..=hi {
            let x = h[(i, j)];
            let y = h[(i + 1, j)];
            h[(i, j)] = c * x + s * y;
            h[(i + 1, j)] = -s.conj() * x + c * y;
        }
        rots.push((c, s));
    }
    for i in lo..hi {
        let (c, s) = rots[i - lo];
        // Columns i, i+1 over rows lo..=i+1.
        for r in lo..=i + 1 {
            let x = h[(r, i)];
            let y = h[(r, i + 1)];
            h[(r, i)] = c * x + y * s.conj();
            h[(r, i + 1)] = -x * s + c * y;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// Complex Givens pair `(c real, s)` with
/// `[[c, s], [-conj(s), c]] [f; g] = [r; 0]`.
fn givens(f: Complex, g: Complex) -> (f64, Complex) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex::new(0.0, 0.0));
    }
    let fn_ = f.norm();
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let d = (fn_ * fn_ + gn * gn).sqrt();
    let c = fn_ / d;
    let s = (f / fn_) * g.conj() / d;
    (c, s)
}

/// An eigenvector of `z` for `lambda` by regularized inverse iteration.
pub(crate) fn eigenvector_for(z: &CMatrix, lambda: Complex, scale: f64) -> Result<Vec<Complex>> {
    let n = z.rows();
    let mut shifted = z.clone();
    for i in 0..n {
        shifted[(i, i)] -= lambda;
    }
    let lu = shifted.lu()?;
    let floor = scale.max(1e-300) * f64::EPSILON * (n as f64);
    let target = tol::EIGENPAIR_RESIDUAL_REL * scale.max(1e-300);

    let residual_of = |x: &[Complex]| -> f64 {
        let zx = z.matvec(x).expect("shape");
        zx.iter()
            .zip(x)
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };

    let mut best: Option<(Vec<Complex>, f64)> = None;
    for attempt in 0..3u32 {
        let mut x: Vec<Complex> = (0..n)
            .map(|k| {
                let t = (k as f64 + 1.0) * 0.7391 + f64::from(attempt) * 1.9041;
                Complex::new(t.cos(), t.sin())
            })
            .collect();
        normalize(&mut x);
        for _ in 0..4 {
            let mut y = lu.solve_regularized(&x, floor);
            normalize(&mut y);
            std::mem::swap(&mut x, &mut y);
            let res = residual_of(&x);
            if best.as_ref().is_none_or(|(_, b)| res < *b) {
                best = Some((x.clone(), res));
            }
            if res <= target * 1e-3 {
                return Ok(x);
            }
        }
        if let Some((_, b)) = &best {
            if *b <= target {
                break;
            }
        }
    }
    let (x, res) = best.expect("at least one iterate");
    if res <= target {
        Ok(x)
    } else {
        Err(Error::NotAnEigenvalue {
            re: lambda.re,
            im: lambda.im,
            residual: res,
        })
    }
}

fn normalize(x: &mut [Complex]) {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in x.iter_mut() {
            *z /= norm;
        }
    }
}

// ---------------------------------------------------------------------------
// Right eigenvalues
// ---------------------------------------------------------------------------

/// Right eigenvalues of `M` (`M psi = psi q`): the spectrum of the complex
/// adjoint folds into conjugate pairs, one canonical representative per
/// pair.
pub fn right_eigenvalues(m: &QMatrix) -> Result<Spectrum> {
    let n = m.require_square()?;
    let vals = complex_eigenvalues(&m.complexify())?;
    let scale = m.norm_max();
    let tol = tol::PAIRING_RESIDUAL_REL * scale + 1e-300;

    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| vals[b].im.total_cmp(&vals[a].im));
    let mut used = vec![false; 2 * n];
    let mut reps = Vec::with_capacity(n);
    for &idx in &order {
        if used[idx] {
            continue;
        }
        used[idx] = true;
        let target = vals[idx].conj();
        let mut best: Option<(usize, f64)> = None;
        for (j, val) in vals.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (val - target).norm();
            if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                best = Some((j, d));
            }
        }
        let (j, residual) = best.expect("even count");
        used[j] = true;
        if residual > tol {
            return Err(Error::PairingFailure { residual, tol });
        }
        let re = (vals[idx].re + vals[j].re) / 2.0;
        let im = ((vals[idx].im - vals[j].im) / 2.0).max(0.0);
        reps.push(Complex::new(re, im));
    }
    reps.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(Spectrum { values: reps })
}

/// A unit right eigenvector `psi` with `M psi = psi lambda`, built from a
/// complex eigenvector `(x; y)` of the adjoint as `psi = x + j y`.
pub fn right_eigenvector(m: &QMatrix, lambda: Complex) -> Result<QMatrix> {
    let n = m.require_square()?;
    let z = m.complexify();
    let scale = m.norm_max().max(lambda.norm());
    let x = eigenvector_for(&z, lambda, scale)?;
    let mut psi: Vec<Quaternion> = (0..n)
        .map(|i| Quaternion::from_complex_parts(x[i], x[i + n]))
        .collect();
    let norm = psi.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
    for q in &mut psi {
        *q = *q / norm;
    }
    Ok(QMatrix::column(&psi))
}

// ---------------------------------------------------------------------------
// Schur triangularization
// ---------------------------------------------------------------------------

/// A unitary matrix whose first column is the given unit vector: a
/// Householder reflector onto the phase-flattened vector, followed by the
/// phase correction on the first slot.
fn unitary_with_first_column(psi: &QMatrix) -> Result<QMatrix> {
    let n = psi.rows();
    let first = psi[(0, 0)];
    let phase = if first.norm() > 1e-14 {
        first / first.norm()
    } else {
        quat::ONE
    };
    // Right-multiplying by conj(phase) makes the first component real
    // nonnegative, which is exactly the case where the reflector on
    // e1 - psi' sends e1 to psi'.
    let mut v: Vec<Quaternion> = (0..n).map(|i| psi[(i, 0)] * phase.conj()).collect();
    v[0] -= quat::ONE;
    let vnorm2: f64 = v.iter().map(|q| q.norm_sqr()).sum();
    let q0 = if vnorm2 <= 1e-28 {
        QMatrix::identity(n)
    } else {
        QMatrix::householder_reflector(&v)?
    };
    let phase_fix = QMatrix::elementary_diag(n, 0, phase)?;
    q0.matmul(&phase_fix)
}

/// Unitary Schur triangularization `M = U^+ T U` by eigenvector deflation:
/// each step extracts one right eigenpair of the trailing block and rotates
/// its eigenvector onto the leading slot.
pub fn schur(m: &QMatrix) -> Result<SchurForm> {
    let n = m.require_square()?;
    let mut t = m.clone();
    let mut w = QMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let size = n - k;
        let sub = QMatrix::from_fn(size, size, |i, j| t[(i + k, j + k)]);
        let spectrum = right_eigenvalues(&sub)?;
        let lambda = spectrum.values[0];
        let psi = right_eigenvector(&sub, lambda)?;
        let q = unitary_with_first_column(&psi)?;
        let q_adj = q.adjoint();

        // t[k.., k..] <- q^+ sub q
        let rotated = q_adj.matmul(&sub)?.matmul(&q)?;
        for i in 0..size {
            for j in 0..size {
                t[(i + k, j + k)] = rotated[(i, j)];
            }
        }
        if k > 0 {
            // t[0..k, k..] <- t[0..k, k..] q
            let top = QMatrix::from_fn(k, size, |i, j| t[(i, j + k)]);
            let top = top.matmul(&q)?;
            for i in 0..k {
                for j in 0..size {
                    t[(i, j + k)] = top[(i, j)];
                }
            }
            // t[k.., 0..k] <- q^+ t[k.., 0..k]; noise-level entries, kept so
            // the transform stays an exact similarity.
            let left = QMatrix::from_fn(size, k, |i, j| t[(i + k, j)]);
            let left = q_adj.matmul(&left)?;
            for i in 0..size {
                for j in 0..k {
                    t[(i + k, j)] = left[(i, j)];
                }
            }
        }
        // w <- w (I_k (+) q)
        let wcols = QMatrix::from_fn(n, size, |i, j| w[(i, j + k)]);
        let wcols = wcols.matmul(&q)?;
        for i in 0..n {
            for j in 0..size {
                w[(i, j + k)] = wcols[(i, j)];
            }
        }
    }
    Ok(SchurForm { u: w.adjoint(), t })
}

// ---------------------------------------------------------------------------
// Singular value decomposition
// ---------------------------------------------------------------------------

/// Singular values only: square roots of the Gram spectrum, non-increasing.
/// Gram eigenvalues below the rank cutoff [`tol::GRAM_RANK_REL`] count as
/// zero.
pub fn singular_values(m: &QMatrix) -> Result<Vec<f64>> {
    let k = m.rows().min(m.cols());
    let gram = if m.cols() <= m.rows() {
        m.adjoint().matmul(m)?
    } else {
        m.matmul(&m.adjoint())?
    };
    let spectrum = right_eigenvalues(&gram)?;
    let mut lambdas: Vec<f64> = spectrum.values.iter().map(|l| l.re).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    lambdas.truncate(k);
    let cutoff = tol::GRAM_RANK_REL * lambdas.first().copied().unwrap_or(0.0).max(0.0);
    Ok(lambdas
        .iter()
        .map(|&l| if l <= cutoff { 0.0 } else { l.sqrt() })
        .collect())
}

/// Full decomposition `M = U Sigma V` via the hermitian Schur form of the
/// Gram matrix `M^+ M`.
pub fn svd(m: &QMatrix) -> Result<SvdForm> {
    let rows = m.rows();
    let cols = m.cols();
    let k = rows.min(cols);
    let gram = m.adjoint().matmul(m)?;
    let gram_schur = schur(&gram)?;
    // Columns of u^+ are orthonormal eigenvectors of the Gram matrix, with
    // the (real) eigenvalues on the diagonal of t.
    let w = gram_schur.u.adjoint();
    let mut order: Vec<(f64, usize)> = (0..cols)
        .map(|i| (gram_schur.t[(i, i)].re(), i))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));

    let lam_max = order.first().map_or(0.0, |p| p.0).max(0.0);
    let cutoff = tol::GRAM_RANK_REL * lam_max;
    let sigma: Vec<f64> = order
        .iter()
        .take(k)
        .map(|&(l, _)| if l <= cutoff { 0.0 } else { l.sqrt() })
        .collect();

    // V = (sorted eigenvector matrix)^+; M then maps each eigenvector onto
    // a scaled column of U.
    let w_sorted = QMatrix::from_fn(cols, cols, |i, j| w[(i, order[j].1)]);
    let v = w_sorted.adjoint();

    let mut u_cols: Vec<Vec<Quaternion>> = Vec::with_capacity(rows);
    for (j, &s) in sigma.iter().enumerate() {
        if s <= 0.0 {
            break;
        }
        let wj: Vec<Quaternion> = (0..cols).map(|i| w_sorted[(i, j)]).collect();
        let mwj = m.matmul(&QMatrix::column(&wj))?;
        u_cols.push((0..rows).map(|i| mwj[(i, 0)] / s).collect());
    }
    complete_orthonormal(&mut u_cols, rows);
    let u = QMatrix::from_fn(rows, rows, |i, j| u_cols[j][i]);

    Ok(SvdForm { u, sigma, v })
}

/// Extends a partial orthonormal set of length-`dim` columns to a full
/// basis: Gram-Schmidt over unit vectors, then a deterministic dense
/// fallback for pathological alignments.
fn complete_orthonormal(cols: &mut Vec<Vec<Quaternion>>, dim: usize) {
    let mut candidate = 0usize;
    while cols.len() < dim {
        let mut v: Vec<Quaternion> = if candidate < dim {
            (0..dim)
                .map(|i| if i == candidate { quat::ONE } else { quat::ZERO })
                .collect()
        } else {
            (0..dim)
                .map(|i| {
                    let t = (i + 2) as f64 * 0.83 + candidate as f64;
                    Quaternion::new(t.cos(), t.sin(), (2.0 * t).cos(), (2.0 * t).sin())
                })
                .collect()
        };
        candidate += 1;
        for _ in 0..2 {
            for col in cols.iter() {
                let coef = col
                    .iter()
                    .zip(v.iter())
                    .fold(quat::ZERO, |acc, (c, x)| acc + c.conj() * *x);
                for (vi, ci) in v.iter_mut().zip(col.iter()) {
                    *vi -= *ci * coef;
                }
            }
        }
        let norm = v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for q in &mut v {
                *q = *q / norm;
            }
            cols.push(v);
        }
    }
}
