//! Schur-complement block inversion for general size, the complete closed
//! form for 2x2 matrices including every zero-entry limit convention, and
//! the Hadamard-form inverse.
//!
//! The entrywise zero-entry limit conventions exist only for the 2x2 case;
//! no clean generalization is known for larger sizes, so [`invert`] handles
//! singular leading entries by row permutation instead of limits.

use crate::error::{Error, Result};
use crate::qmat::QMatrix;
use crate::quat::{self, Quaternion};
use crate::tol;

/// The forward block factorization
/// `M = [[I, 0], [C A^{-1}, I]] (A (+) A_S) [[I, A^{-1} B], [0, I]]`.
#[derive(Debug, Clone)]
pub struct BlockFactorization {
    pub k: usize,
    /// Unit lower block triangular factor.
    pub l: QMatrix,
    /// Block diagonal `A (+) A_S`.
    pub dblk: QMatrix,
    /// Unit upper block triangular factor.
    pub r: QMatrix,
}

impl BlockFactorization {
    /// Multiplies the three factors back together.
    pub fn reconstruct(&self) -> QMatrix {
        self.l
            .matmul(&self.dblk)
            .and_then(|ld| ld.matmul(&self.r))
            .expect("factor shapes are consistent by construction")
    }
}

/// Schur complement `A_S = D - C A^{-1} B` of the leading `k x k` block.
pub fn schur_complement(m: &QMatrix, k: usize) -> Result<QMatrix> {
    let (a, b, c, d) = m.block_split(k)?;
    let a_inv = invert(&a).map_err(|_| Error::SingularLeadingBlock)?;
    let correction = c.matmul(&a_inv)?.matmul(&b)?;
    Ok(&d - &correction)
}

/// The factorization behind the block inverse; requires an invertible
/// leading block.
pub fn block_factorize(m: &QMatrix, k: usize) -> Result<BlockFactorization> {
    let n = m.require_square()?;
    let (a, b, c, d) = m.block_split(k)?;
    let a_inv = invert(&a).map_err(|_| Error::SingularLeadingBlock)?;
    let ca_inv = c.matmul(&a_inv)?;
    let a_inv_b = a_inv.matmul(&b)?;
    let a_s = &d - &ca_inv.matmul(&b)?;
    let ik = QMatrix::identity(k);
    let im = QMatrix::identity(n - k);
    let zero_tr = QMatrix::zeros(k, n - k);
    let zero_bl = QMatrix::zeros(n - k, k);
    Ok(BlockFactorization {
        k,
        l: QMatrix::block_join(&ik, &zero_tr, &ca_inv, &im)?,
        dblk: QMatrix::block_join(&a, &zero_tr, &zero_bl, &a_s)?,
        r: QMatrix::block_join(&ik, &a_inv_b, &zero_bl, &im)?,
    })
}

/// Block inverse at split `k`:
/// `M^{-1} = [[I, -A^{-1}B], [0, I]] (A^{-1} (+) A_S^{-1}) [[I, 0], [-CA^{-1}, I]]`.
pub fn block_inverse(m: &QMatrix, k: usize) -> Result<QMatrix> {
    let n = m.require_square()?;
    let (a, b, c, d) = m.block_split(k)?;
    let a_inv = invert(&a).map_err(|_| Error::SingularLeadingBlock)?;
    let ca_inv = c.matmul(&a_inv)?;
    let a_inv_b = a_inv.matmul(&b)?;
    let a_s = &d - &ca_inv.matmul(&b)?;
    let s_inv = invert(&a_s).map_err(|_| Error::SingularSchurComplement)?;

    let ik = QMatrix::identity(k);
    let im = QMatrix::identity(n - k);
    let zero_tr = QMatrix::zeros(k, n - k);
    let zero_bl = QMatrix::zeros(n - k, k);
    let f1 = QMatrix::block_join(&ik, &a_inv_b.scale(-1.0), &zero_bl, &im)?;
    let f2 = QMatrix::block_join(&a_inv, &zero_tr, &zero_bl, &s_inv)?;
    let f3 = QMatrix::block_join(&ik, &zero_tr, &ca_inv.scale(-1.0), &im)?;
    f1.matmul(&f2)?.matmul(&f3)
}

/// Inverse by repeated Schur-complement size reduction. A row permutation
/// computed by partially pivoted elimination first makes every leading
/// block of the permuted matrix invertible; the permutation is undone on
/// output. Errors with `SingularMatrix` when elimination finds a
/// numerically zero pivot column.
pub fn invert(m: &QMatrix) -> Result<QMatrix> {
    let n = m.require_square()?;
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let perm = pivoting_permutation(m).ok_or(Error::SingularMatrix)?;
    let p = QMatrix::permutation_of_rows(&perm);
    let pm = p.matmul(m)?;
    let inv_pm = invert_recursive(&pm)?;
    inv_pm.matmul(&p)
}

/// Row permutation from quaternionic elimination with partial pivoting;
/// `None` when a pivot column is numerically zero. With this row order all
/// leading principal blocks of `P M` are invertible, so the plain split
/// recursion needs no further pivoting.
fn pivoting_permutation(m: &QMatrix) -> Option<Vec<usize>> {
    let n = m.rows();
    let scale = m.norm_max();
    let mut work = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut block_max = scale;
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
        if pivot_norm <= tol::PIVOT_ZERO_REL * block_max || pivot_norm <= tol::ABS_ZERO {
            return None;
        }
        work.swap_rows(k, pivot_row);
        perm.swap(k, pivot_row);
        let pivot_inv = work[(k, k)].inverse().ok()?;
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
    }
    Some(perm)
}

fn invert_recursive(m: &QMatrix) -> Result<QMatrix> {
    let n = m.rows();
    if n == 1 {
        let inv = m[(0, 0)].inverse().map_err(|_| Error::SingularMatrix)?;
        return Ok(QMatrix::diag(&[inv]));
    }
    let k = n / 2;
    let (a, b, c, d) = m.block_split(k)?;
    let a_inv = invert_recursive(&a)?;
    let ca_inv = c.matmul(&a_inv)?;
    let a_inv_b = a_inv.matmul(&b)?;
    let a_s = &d - &ca_inv.matmul(&b)?;
    let s_inv = invert_recursive(&a_s)?;

    // Assembled form of the three-factor product.
    let tr = a_inv_b.matmul(&s_inv)?.scale(-1.0); // -A^{-1} B S^{-1}
    let bl = s_inv.matmul(&ca_inv)?.scale(-1.0); // -S^{-1} C A^{-1}
    let tl = &a_inv - &a_inv_b.matmul(&bl)?; // A^{-1} + A^{-1}B S^{-1} C A^{-1}
    QMatrix::block_join(&tl, &tr, &bl, &s_inv)
}

/// Inverse by Gauss-Jordan elimination with partial pivoting; an
/// elimination-based alternative to [`invert`] used for cross-checking.
pub fn invert_gauss(m: &QMatrix) -> Result<QMatrix> {
    let n = m.require_square()?;
    let scale = m.norm_max();
    let mut work = m.clone();
    let mut inv = QMatrix::identity(n);
    for k in 0..n {
        let mut block_max = scale;
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
        if pivot_norm <= tol::PIVOT_ZERO_REL * block_max || pivot_norm <= tol::ABS_ZERO {
            return Err(Error::SingularMatrix);
        }
        work.swap_rows(k, pivot_row);
        inv.swap_rows(k, pivot_row);
        let pivot_inv = work[(k, k)].inverse().map_err(|_| Error::SingularMatrix)?;
        for j in 0..n {
            work[(k, j)] = pivot_inv * work[(k, j)];
            inv[(k, j)] = pivot_inv * inv[(k, j)];
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = work[(i, k)];
            if factor == quat::ZERO {
                continue;
            }
            for j in 0..n {
                let w = factor * work[(k, j)];
                work[(i, j)] -= w;
                let v = factor * inv[(k, j)];
                inv[(i, j)] -= v;
            }
        }
    }
    Ok(inv)
}

/// Entry classification for the 2x2 closed form.
#[derive(Clone, Copy, PartialEq)]
enum EntryClass {
    Zero,
    Gray,
    Good,
}

fn classify(q: &Quaternion, scale: f64) -> EntryClass {
    let norm = q.norm();
    if norm <= tol::PIVOT_ZERO_REL * scale {
        EntryClass::Zero
    } else if norm <= tol::CLOSED_FORM_BAND_REL * scale {
        EntryClass::Gray
    } else {
        EntryClass::Good
    }
}

/// Closed-form inverse of a 2x2 matrix.
///
/// With all four entries nonzero the entrywise formulas
/// `a~ = (a - b d^{-1} c)^{-1}` (and its three siblings) apply verbatim.
/// A zero entry switches to the limit convention obtained by letting that
/// entry shrink to zero, e.g. `a = 0` gives
/// `[[-c^{-1} d b^{-1}, c^{-1}], [b^{-1}, 0]]`. Entries inside the
/// ill-conditioned band between "zero" and "safely nonzero" route the
/// matrix to block elimination instead.
pub fn inverse_2x2(m: &QMatrix) -> Result<QMatrix> {
    let n = m.require_square()?;
    if n != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected 2x2, got {n}x{n}"
        )));
    }
    let scale = m.norm_max();
    if scale == 0.0 {
        return Err(Error::SingularMatrix);
    }
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let classes = [
        classify(&a, scale),
        classify(&b, scale),
        classify(&c, scale),
        classify(&d, scale),
    ];
    if classes.contains(&EntryClass::Gray) {
        return invert(m);
    }
    let za = classes[0] == EntryClass::Zero;
    let zb = classes[1] == EntryClass::Zero;
    let zc = classes[2] == EntryClass::Zero;
    let zd = classes[3] == EntryClass::Zero;

    let inv = |q: Quaternion| q.inverse().map_err(|_| Error::SingularMatrix);

    let rows = if za {
        if zb || zc {
            return Err(Error::SingularMatrix);
        }
        // a -> 0 limit; also covers a = d = 0.
        let (bi, ci) = (inv(b)?, inv(c)?);
        vec![vec![-(ci * d * bi), ci], vec![bi, quat::ZERO]]
    } else if zd {
        if zb || zc {
            return Err(Error::SingularMatrix);
        }
        let (bi, ci) = (inv(b)?, inv(c)?);
        vec![vec![quat::ZERO, ci], vec![bi, -(bi * a * ci)]]
    } else if zb {
        // Covers b = 0 and b = c = 0.
        let (ai, di) = (inv(a)?, inv(d)?);
        vec![vec![ai, quat::ZERO], vec![-(di * c * ai), di]]
    } else if zc {
        let (ai, di) = (inv(a)?, inv(d)?);
        vec![vec![ai, -(ai * b * di)], vec![quat::ZERO, di]]
    } else {
        // All four entrywise formulas, verbatim.
        let (ai, bi, ci, di) = (inv(a)?, inv(b)?, inv(c)?, inv(d)?);
        let ta = singular_guarded_inverse(a - b * di * c, scale)?;
        let tb = singular_guarded_inverse(c - d * bi * a, scale)?;
        let tc = singular_guarded_inverse(b - a * ci * d, scale)?;
        let td = singular_guarded_inverse(d - c * ai * b, scale)?;
        vec![vec![ta, tb], vec![tc, td]]
    };
    QMatrix::from_rows(rows)
}

fn singular_guarded_inverse(q: Quaternion, scale: f64) -> Result<Quaternion> {
    if q.norm() <= tol::PIVOT_ZERO_REL * scale {
        return Err(Error::SingularMatrix);
    }
    q.inverse().map_err(|_| Error::SingularMatrix)
}

/// Hadamard-form inverse of a 2x2 matrix with all entries nonzero:
/// `M^{-1} = (1 / Sdet) [[|d|, |b|], [|c|, |a|]] o [[a~/|a~|, ...]]`,
/// the entrywise product of the norm matrix and the termwise-unit matrix
/// of the closed-form inverse.
pub fn inverse_2x2_hadamard(m: &QMatrix) -> Result<QMatrix> {
    let n = m.require_square()?;
    if n != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected 2x2, got {n}x{n}"
        )));
    }
    let scale = m.norm_max();
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    for (idx, q) in [a, b, c, d].iter().enumerate() {
        if q.norm() <= tol::PIVOT_ZERO_REL * scale.max(tol::ABS_ZERO) {
            return Err(Error::ZeroEntry {
                i: idx / 2,
                j: idx % 2,
            });
        }
    }
    let sdet = crate::qdet::sdet_gauss(m)?;
    if sdet <= tol::PIVOT_ZERO_REL * scale * scale {
        return Err(Error::SingularMatrix);
    }
    let inv = |q: Quaternion| q.inverse().map_err(|_| Error::SingularMatrix);
    let ta = singular_guarded_inverse(a - b * inv(d)? * c, scale)?;
    let tb = singular_guarded_inverse(c - d * inv(b)? * a, scale)?;
    let tc = singular_guarded_inverse(b - a * inv(c)? * d, scale)?;
    let td = singular_guarded_inverse(d - c * inv(a)? * b, scale)?;

    let norms = QMatrix::from_rows(vec![
        vec![Quaternion::real(d.norm()), Quaternion::real(b.norm())],
        vec![Quaternion::real(c.norm()), Quaternion::real(a.norm())],
    ])?;
    let units = QMatrix::from_rows(vec![
        vec![ta / ta.norm(), tb / tb.norm()],
        vec![tc / tc.norm(), td / td.norm()],
    ])?;
    Ok(norms.hadamard(&units)?.scale(1.0 / sdet))
}

/// The four norm expressions
/// `|a||d - c a^{-1} b|`, `|b||c - d b^{-1} a|`, `|c||b - a c^{-1} d|`,
/// `|d||a - b d^{-1} c|`, each equal to the Study determinant. A zero
/// inverted entry replaces its expression by the limit value (`|b||c|` or
/// `|a||d|` as appropriate).
pub fn four_expressions(m: &QMatrix) -> Result<[f64; 4]> {
    let n = m.require_square()?;
    if n != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected 2x2, got {n}x{n}"
        )));
    }
    let scale = m.norm_max();
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let zero = |q: &Quaternion| q.norm() <= tol::PIVOT_ZERO_REL * scale;
    let e_a = if zero(&a) {
        b.norm() * c.norm()
    } else {
        a.norm() * (d - c * a.inverse()? * b).norm()
    };
    let e_b = if zero(&b) {
        a.norm() * d.norm()
    } else {
        b.norm() * (c - d * b.inverse()? * a).norm()
    };
    let e_c = if zero(&c) {
        a.norm() * d.norm()
    } else {
        c.norm() * (b - a * c.inverse()? * d).norm()
    };
    let e_d = if zero(&d) {
        b.norm() * c.norm()
    } else {
        d.norm() * (a - b * d.inverse()? * c).norm()
    };
    Ok([e_a, e_b, e_c, e_d])
}

impl QMatrix {
    /// Permutation matrix sending row `perm[k]` of the operand to row `k`,
    /// i.e. `(P M)[k] = M[perm[k]]`.
    pub(crate) fn permutation_of_rows(perm: &[usize]) -> QMatrix {
        let n = perm.len();
        let mut p = QMatrix::zeros(n, n);
        for (k, &src) in perm.iter().enumerate() {
            p[(k, src)] = quat::ONE;
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdet::{sdet_complexify, sdet_gauss, vanishing_expression_unitaries};
    use crate::quat::{I, J, K, ONE, ZERO};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn residual(m: &QMatrix, inv: &QMatrix) -> f64 {
        let n = m.rows();
        let left = m.matmul(inv).unwrap().max_abs_diff(&QMatrix::identity(n));
        let right = inv.matmul(m).unwrap().max_abs_diff(&QMatrix::identity(n));
        left.max(right)
    }

    #[test]
    fn schur_complement_examples() {
        // Block diagonal: the complement is just D.
        let m = QMatrix::diag(&[ONE * 2.0, J, K * 3.0]);
        let s = schur_complement(&m, 1).unwrap();
        assert_eq!(s, QMatrix::diag(&[J, K * 3.0]));

        // [[1, i], [j, k]] at k = 1: k - j*1*i = k + k = 2k.
        let m = QMatrix::from_rows(vec![vec![ONE, I], vec![J, K]]).unwrap();
        let s = schur_complement(&m, 1).unwrap();
        assert!((s[(0, 0)] - K * 2.0).norm() < 1e-14);
        assert!((s[(0, 0)].norm() - 2.0).abs() < 1e-14);
        assert!((sdet_gauss(&m).unwrap() - 2.0).abs() < 1e-14);

        for k in 1..4 {
            assert_eq!(
                schur_complement(&QMatrix::identity(4), k).unwrap(),
                QMatrix::identity(4 - k)
            );
        }
    }

    #[test]
    fn factorization_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..20 {
            let n = rng.gen_range(2..7);
            let m = QMatrix::random(n, n, &mut rng);
            let k = rng.gen_range(1..n);
            match block_factorize(&m, k) {
                Ok(f) => {
                    let rebuilt = f.reconstruct();
                    assert!(rebuilt.max_abs_diff(&m) <= 1e-10 * m.norm_max().max(1.0));
                }
                Err(Error::SingularLeadingBlock) => {} // random blocks may be singular
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn block_inverse_cases() {
        let q1 = ONE + I;
        let q2 = J * 2.0;
        let m = QMatrix::diag(&[q1, q2]);
        let inv = block_inverse(&m, 1).unwrap();
        assert!(inv.max_abs_diff(&QMatrix::diag(&[
            q1.inverse().unwrap(),
            q2.inverse().unwrap()
        ])) < 1e-14);

        let (a, _) = vanishing_expression_unitaries();
        let inv = block_inverse(&a, 1).unwrap();
        assert!(inv.max_abs_diff(&a.adjoint()) <= 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..20 {
            let n = rng.gen_range(2..8);
            let m = QMatrix::random(n, n, &mut rng);
            if let Ok(inv) = block_inverse(&m, n / 2) {
                assert!(residual(&m, &inv) <= 1e-9 * m.norm_max().max(1.0));
            }
        }
    }

    #[test]
    fn singular_leading_block_reported() {
        let m = QMatrix::from_rows(vec![vec![ZERO, I], vec![J, K]]).unwrap();
        assert_eq!(block_inverse(&m, 1).unwrap_err(), Error::SingularLeadingBlock);
        // But the full inverse permutes around it.
        let inv = invert(&m).unwrap();
        assert!(residual(&m, &inv) <= 1e-12);
    }

    #[test]
    fn invert_basics() {
        assert!(invert(&QMatrix::identity(4))
            .unwrap()
            .max_abs_diff(&QMatrix::identity(4))
            < 1e-14);
        let p = QMatrix::permutation(&[2, 0, 1]).unwrap();
        let inv = invert(&p).unwrap();
        assert!(inv.max_abs_diff(&p.adjoint()) < 1e-14);
        assert_eq!(invert(&QMatrix::zeros(3, 3)).unwrap_err(), Error::SingularMatrix);
        // Rank-1.
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let u = QMatrix::random(3, 1, &mut rng);
        let v = QMatrix::random(1, 3, &mut rng);
        let rank1 = u.matmul(&v).unwrap();
        assert_eq!(invert(&rank1).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn invert_matches_elimination_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..30 {
            let n = rng.gen_range(1..9);
            let m = QMatrix::random(n, n, &mut rng);
            let inv = invert(&m).unwrap();
            assert!(residual(&m, &inv) <= 1e-9 * m.norm_max().max(1.0), "n={n}");
            let oracle = invert_gauss(&m).unwrap();
            assert!(inv.max_abs_diff(&oracle) <= 1e-8 * oracle.norm_max().max(1.0));
        }
    }

    #[test]
    fn closed_form_2x2_zero_leading_entry() {
        let m = QMatrix::from_rows(vec![vec![ZERO, I], vec![J, K]]).unwrap();
        let inv = inverse_2x2(&m).unwrap();
        let expect =
            QMatrix::from_rows(vec![vec![ONE, -J], vec![-I, ZERO]]).unwrap();
        assert!(inv.max_abs_diff(&expect) < 1e-14);
        assert!(residual(&m, &inv) < 1e-14);
    }

    #[test]
    fn closed_form_2x2_diagonal_and_antidiagonal() {
        let q = ONE + I + J;
        let p = K * 2.0 - ONE;
        let m = QMatrix::diag(&[q, p]);
        let inv = inverse_2x2(&m).unwrap();
        assert!(inv.max_abs_diff(&QMatrix::diag(&[
            q.inverse().unwrap(),
            p.inverse().unwrap()
        ])) < 1e-14);

        let anti = QMatrix::from_rows(vec![vec![ZERO, q], vec![p, ZERO]]).unwrap();
        let inv = inverse_2x2(&anti).unwrap();
        assert!(residual(&anti, &inv) < 1e-13);
        assert_eq!(inv[(0, 0)], ZERO);
        assert_eq!(inv[(1, 1)], ZERO);
    }

    #[test]
    fn closed_form_matches_block_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..200 {
            let m = QMatrix::random(2, 2, &mut rng);
            let closed = inverse_2x2(&m).unwrap();
            let blocked = invert(&m).unwrap();
            assert!(closed.max_abs_diff(&blocked) <= 1e-10 * blocked.norm_max().max(1.0));
        }
    }

    #[test]
    fn closed_form_zero_patterns_invert() {
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        for pattern in 0..4usize {
            for _ in 0..100 {
                let mut m = QMatrix::random(2, 2, &mut rng);
                m[(pattern / 2, pattern % 2)] = ZERO;
                match inverse_2x2(&m) {
                    Ok(inv) => {
                        assert!(residual(&m, &inv) <= 1e-9 * m.norm_max().max(1.0));
                    }
                    Err(Error::SingularMatrix) => {}
                    Err(e) => panic!("unexpected {e}"),
                }
            }
        }
    }

    #[test]
    fn singular_2x2_rejected() {
        let m = QMatrix::from_rows(vec![vec![ONE, ONE], vec![ONE, ONE]]).unwrap();
        assert_eq!(inverse_2x2(&m).unwrap_err(), Error::SingularMatrix);
        let rows_zero = QMatrix::from_rows(vec![vec![ZERO, ZERO], vec![J, K]]).unwrap();
        assert_eq!(inverse_2x2(&rows_zero).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn gray_band_falls_back() {
        // One entry far below the others but above the zero threshold.
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        let mut m = QMatrix::random(2, 2, &mut rng);
        m[(0, 0)] = I * 1e-9;
        let inv = inverse_2x2(&m).unwrap();
        assert!(residual(&m, &inv) <= 1e-7 * m.norm_max());
    }

    #[test]
    fn hadamard_form_matches_closed_form() {
        let m = QMatrix::from_rows(vec![vec![ONE, I], vec![J, K]]).unwrap();
        let h = inverse_2x2_hadamard(&m).unwrap();
        let closed = inverse_2x2(&m).unwrap();
        assert!(h.max_abs_diff(&closed) <= 1e-10);

        let (_, b) = vanishing_expression_unitaries();
        let h = inverse_2x2_hadamard(&b).unwrap();
        assert!(h.max_abs_diff(&b.adjoint()) <= 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(58);
        for _ in 0..100 {
            let m = QMatrix::random(2, 2, &mut rng);
            let h = match inverse_2x2_hadamard(&m) {
                Ok(h) => h,
                Err(Error::SingularMatrix) => continue,
                Err(e) => panic!("unexpected {e}"),
            };
            let closed = inverse_2x2(&m).unwrap();
            assert!(h.max_abs_diff(&closed) <= 1e-10 * closed.norm_max().max(1.0));
        }

        let with_zero = QMatrix::from_rows(vec![vec![ZERO, I], vec![J, K]]).unwrap();
        assert!(matches!(
            inverse_2x2_hadamard(&with_zero),
            Err(Error::ZeroEntry { i: 0, j: 0 })
        ));
    }

    #[test]
    fn four_expressions_agree_with_sdet() {
        let (a, _) = vanishing_expression_unitaries();
        for e in four_expressions(&a).unwrap() {
            assert!((e - 1.0).abs() <= 1e-12);
        }
        let m = QMatrix::from_rows(vec![vec![ONE, I], vec![J, K]]).unwrap();
        for e in four_expressions(&m).unwrap() {
            assert!((e - 2.0).abs() <= 1e-12);
        }
        let d = QMatrix::diag(&[ONE * 2.0, ONE * 3.0]);
        for e in four_expressions(&d).unwrap() {
            assert!((e - 6.0).abs() <= 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..100 {
            let m = QMatrix::random(2, 2, &mut rng);
            let s = sdet_complexify(&m).unwrap();
            for e in four_expressions(&m).unwrap() {
                assert!((e - s).abs() <= 1e-10 * (1.0 + s));
            }
        }
    }

    #[test]
    fn zero_entry_limit_rate() {
        // As a -> 0 the trailing closed-form entry decays linearly:
        // |d~| = |d - c a^{-1} b|^{-1} ~ |a| / (|c||b|).
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let dir = {
            let q = QMatrix::random(1, 1, &mut rng)[(0, 0)];
            q / q.norm()
        };
        let b = I + ONE * 0.5;
        let c = J - K * 0.25;
        let d = ONE + K;
        for exp in 3..=8 {
            let t = 10f64.powi(-exp);
            let a = dir * t;
            let td = (d - c * a.inverse().unwrap() * b).inverse().unwrap();
            let predicted = t / (c.norm() * b.norm());
            let ratio = td.norm() / predicted;
            assert!(
                (0.5..2.0).contains(&ratio),
                "t={t:e}: |d~|={:e}, predicted {predicted:e}",
                td.norm()
            );
        }
    }
}
