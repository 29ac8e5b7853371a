//! Dense complex matrices: the carrier of the complex adjoint of a
//! quaternionic matrix and of the LU / eigenvalue kernels.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64 as Complex;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
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

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lik = self[(i, k)];
                if lik == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += lik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies `self` to a vector.
    pub fn matvec(&self, x: &[Complex]) -> Result<Vec<Complex>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * vec{}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * x[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// LU decomposition with partial pivoting by modulus.
    pub fn lu(&self) -> Result<ComplexLu> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0usize;
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = lu[(k, k)].norm();
            for r in k + 1..n {
                let mag = lu[(r, k)].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_row != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = t;
                }
                perm.swap(k, pivot_row);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            if pivot.norm() == 0.0 {
                continue; // exactly singular column; factors stay valid for det = 0
            }
            for r in k + 1..n {
                let factor = lu[(r, k)] / pivot;
                lu[(r, k)] = factor;
                for j in k + 1..n {
                    let sub = factor * lu[(k, j)];
                    lu[(r, j)] -= sub;
                }
            }
        }
        Ok(ComplexLu { lu, perm, swaps })
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("shape mismatch in CMatrix product")
    }
}

/// Packed LU factors of a square complex matrix.
pub struct ComplexLu {
    lu: CMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl ComplexLu {
    /// Determinant as the signed product of the pivots.
    pub fn det(&self) -> Complex {
        let n = self.lu.rows();
        let mut det = Complex::new(if self.swaps.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0);
        for i in 0..n {
            det *= self.lu[(i, i)];
        }
        det
    }

    /// Product of the pivot magnitudes, which equals `|det|` exactly.
    pub fn det_magnitude(&self) -> f64 {
        let n = self.lu.rows();
        let mut mag = 1.0;
        for i in 0..n {
            mag *= self.lu[(i, i)].norm();
        }
        mag
    }

    /// Smallest pivot magnitude together with the largest, for rank checks.
    pub fn pivot_extrema(&self) -> (f64, f64) {
        let n = self.lu.rows();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..n {
            let m = self.lu[(i, i)].norm();
            lo = lo.min(m);
            hi = hi.max(m);
        }
        (lo, hi)
    }

    /// Solves `A x = b`. Pivots below `pivot_floor` are replaced by that
    /// floor (with their own phase, or `1`) so that inverse iteration can
    /// push through a nearly singular shift.
    pub fn solve_regularized(&self, b: &[Complex], pivot_floor: f64) -> Vec<Complex> {
        let n = self.lu.rows();
        debug_assert_eq!(b.len(), n);
        let mut x: Vec<Complex> = (0..n).map(|i| b[self.perm[i]]).collect();
        // Forward substitution with unit lower factor.
        for i in 0..n {
            for j in 0..i {
                let sub = self.lu[(i, j)] * x[j];
                x[i] -= sub;
            }
        }
        // Back substitution.
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = self.lu[(i, j)] * x[j];
                x[i] -= sub;
            }
            let mut pivot = self.lu[(i, i)];
            let mag = pivot.norm();
            if mag < pivot_floor {
                pivot = if mag == 0.0 {
                    Complex::new(pivot_floor, 0.0)
                } else {
                    pivot * (pivot_floor / mag)
                };
            }
            x[i] /= pivot;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn lu_det_small() {
        let m = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(1.0, 0.0),
            (0, 1) => c(2.0, 0.0),
            (1, 0) => c(3.0, 0.0),
            _ => c(4.0, 0.0),
        });
        let det = m.lu().unwrap().det();
        assert!((det - c(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lu_det_complex_entries() {
        // det [[i, 1],[1, i]] = i*i - 1 = -2
        let m = CMatrix::from_fn(2, 2, |i, j| if i == j { c(0.0, 1.0) } else { c(1.0, 0.0) });
        let det = m.lu().unwrap().det();
        assert!((det - c(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lu_solve() {
        let m = CMatrix::from_fn(3, 3, |i, j| {
            c(
                (i * 3 + j) as f64 + if i == j { 10.0 } else { 1.0 },
                (i as f64) - (j as f64),
            )
        });
        let x_true = vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.25, -3.0)];
        let b = m.matvec(&x_true).unwrap();
        let x = m.lu().unwrap().solve_regularized(&b, 0.0);
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).norm() < 1e-10);
        }
    }

    #[test]
    fn singular_det_is_zero() {
        let m = CMatrix::from_fn(2, 2, |_, j| c(j as f64 + 1.0, 0.0));
        let det = m.lu().unwrap().det();
        assert_eq!(det.norm(), 0.0);
    }
}
