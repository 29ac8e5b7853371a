//! Dense quaternionic matrices: algebra, the complex adjoint embedding,
//! elementary and permutation constructors, and block manipulation.
//!
//! Storage is row-major and dense; the crate targets desk-scale problems
//! (n up to a few dozen), so there is no sparse support and no view types
//! beyond block splitting.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as Complex;
use rand::Rng;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::quat::{self, Quaternion};

/// Dense quaternionic matrix, the universal carrier of the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![quat::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = quat::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows of entries; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diag(values: &[Quaternion]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &q) in values.iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    /// `q I_n`.
    pub fn scalar(n: usize, q: Quaternion) -> Self {
        Self::diag(&vec![q; n])
    }

    /// Column vector from a slice.
    pub fn column(values: &[Quaternion]) -> Self {
        Self {
            rows: values.len(),
            cols: 1,
            entries: values.to_vec(),
        }
    }

    /// Uniformly random entries with components in `(-1, 1)`.
    pub fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(rows, cols, |_, _| {
            Quaternion::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Checked product; entry `(i,j)` is `sum_k X_ik * Y_kj` with the
    /// quaternion factors in that order.
    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self[(i, k)];
                if x == quat::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += x * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Adjoint `(M^+)_ij = conj(M_ji)`.
    pub fn adjoint(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise (Hadamard) product, left factor times right factor.
    pub fn hadamard(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} o {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(QMatrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)] * other[(i, j)]
        }))
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    /// Largest entry norm; the reference scale for relative tolerances.
    pub fn norm_max(&self) -> f64 {
        self.entries.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry norm of the difference.
    pub fn max_abs_diff(&self, other: &QMatrix) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (*x - *y).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise hermitian test: `|M - M^+|_max <= tol * scale`.
    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        self.require_square()?;
        let scale = self.norm_max().max(1e-300);
        Ok(self.max_abs_diff(&self.adjoint()) <= tol * scale)
    }

    /// Unitarity test: `|U^+ U - I|_max <= tol * scale`.
    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        let n = self.require_square()?;
        let gram = self.adjoint().matmul(self)?;
        let scale = self.norm_max().max(1.0);
        Ok(gram.max_abs_diff(&QMatrix::identity(n)) <= tol * scale)
    }

    /// True when every entry lies in the embedded complex plane.
    pub fn is_complex(&self, tol: f64) -> bool {
        let scale = self.norm_max().max(1e-300);
        self.entries.iter().all(|q| q.is_complex(tol * scale))
    }

    /// Complex adjoint `Z[M]`: writing `M = M1 + j M2` entrywise, the
    /// `2 rows x 2 cols` complex matrix `[[M1, -M2*], [M2, M1*]]`.
    pub fn complexify(&self) -> CMatrix {
        let (r, c) = (self.rows, self.cols);
        let mut z = CMatrix::zeros(2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                let (z1, z2) = self[(i, j)].complex_parts();
                z[(i, j)] = z1;
                z[(i, j + c)] = -z2.conj();
                z[(i + r, j)] = z2;
                z[(i + r, j + c)] = z1.conj();
            }
        }
        z
    }

    /// Inverse of [`complexify`](Self::complexify): reads the `M1` and `M2`
    /// blocks back out of a `2r x 2c` complex matrix.
    pub fn decomplexify(z: &CMatrix) -> Result<QMatrix> {
        if !z.rows().is_multiple_of(2) || !z.cols().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "complex adjoint must have even dimensions, got {}x{}",
                z.rows(),
                z.cols()
            )));
        }
        let r = z.rows() / 2;
        let c = z.cols() / 2;
        Ok(QMatrix::from_fn(r, c, |i, j| {
            Quaternion::from_complex_parts(z[(i, j)], z[(i + r, j)])
        }))
    }

    /// Elementary diagonal matrix `M_i(q) = I + (q - 1) E_ii` (index
    /// zero-based).
    pub fn elementary_diag(n: usize, i: usize, q: Quaternion) -> Result<QMatrix> {
        if i >= n {
            return Err(Error::IndexOutOfRange(format!("slot {i} of {n}")));
        }
        let mut m = QMatrix::identity(n);
        m[(i, i)] = q;
        Ok(m)
    }

    /// Elementary shear `M_ij(q) = I + q E_ij`, `i != j` (zero-based).
    pub fn elementary_shear(n: usize, i: usize, j: usize, q: Quaternion) -> Result<QMatrix> {
        if i == j {
            return Err(Error::IndexEqual(i));
        }
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange(format!("({i},{j}) of {n}")));
        }
        let mut m = QMatrix::identity(n);
        m[(i, j)] = q;
        Ok(m)
    }

    /// Permutation matrix with `P_ij = 1` iff `perm[j] = i` (zero-based),
    /// i.e. `P e_j = e_perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<QMatrix> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n {
                return Err(Error::NotAPermutation(format!("index {p} out of 0..{n}")));
            }
            if seen[p] {
                return Err(Error::NotAPermutation(format!("index {p} repeated")));
            }
            seen[p] = true;
        }
        let mut m = QMatrix::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = quat::ONE;
        }
        Ok(m)
    }

    /// Householder reflector `I - 2 v v^+ / |v|^2`; hermitian and unitary.
    pub fn householder_reflector(v: &[Quaternion]) -> Result<QMatrix> {
        let n = v.len();
        let norm2: f64 = v.iter().map(|q| q.norm_sqr()).sum();
        if norm2 <= 1e-300 {
            return Err(Error::ZeroDivision);
        }
        Ok(QMatrix::from_fn(n, n, |i, j| {
            let outer = v[i] * v[j].conj() * (2.0 / norm2);
            if i == j {
                quat::ONE - outer
            } else {
                -outer
            }
        }))
    }

    /// Splits at row/column `k` into `(A, B, C, D)` with `A` the leading
    /// `k x k` block. Requires `1 <= k < n` and a square matrix.
    pub fn block_split(&self, k: usize) -> Result<(QMatrix, QMatrix, QMatrix, QMatrix)> {
        let n = self.require_square()?;
        if k == 0 || k >= n {
            return Err(Error::BadSplitIndex { k, n });
        }
        let a = QMatrix::from_fn(k, k, |i, j| self[(i, j)]);
        let b = QMatrix::from_fn(k, n - k, |i, j| self[(i, j + k)]);
        let c = QMatrix::from_fn(n - k, k, |i, j| self[(i + k, j)]);
        let d = QMatrix::from_fn(n - k, n - k, |i, j| self[(i + k, j + k)]);
        Ok((a, b, c, d))
    }

    /// Reassembles `[[A, B], [C, D]]`.
    pub fn block_join(a: &QMatrix, b: &QMatrix, c: &QMatrix, d: &QMatrix) -> Result<QMatrix> {
        let k = a.rows();
        let m = d.rows();
        if a.cols() != k
            || d.cols() != m
            || b.rows() != k
            || b.cols() != m
            || c.rows() != m
            || c.cols() != k
        {
            return Err(Error::DimensionMismatch("inconsistent block shapes".into()));
        }
        let n = k + m;
        Ok(QMatrix::from_fn(n, n, |i, j| match (i < k, j < k) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - k)],
            (false, true) => c[(i - k, j)],
            (false, false) => d[(i - k, j - k)],
        }))
    }

    /// Leading principal `k x k` submatrix.
    pub fn leading_minor(&self, k: usize) -> Result<QMatrix> {
        let n = self.require_square()?;
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange(format!("minor {k} of {n}")));
        }
        Ok(QMatrix::from_fn(k, k, |i, j| self[(i, j)]))
    }

    /// Swaps two rows in place.
    pub(crate) fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    /// Swaps two columns in place.
    pub(crate) fn swap_cols(&mut self, c1: usize, c2: usize) {
        if c1 == c2 {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + c1, i * self.cols + c2);
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.matmul(rhs).expect("shape mismatch in QMatrix product")
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

/// Embeds a complex matrix on the `{1, i}` plane.
pub fn embed_complex(rows: usize, cols: usize, entries: &[Complex]) -> QMatrix {
    assert_eq!(entries.len(), rows * cols);
    QMatrix::from_fn(rows, cols, |i, j| {
        Quaternion::from_complex(entries[i * cols + j])
    })
}
