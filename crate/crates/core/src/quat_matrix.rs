//! Dense quaternion matrices.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{QrootError, Result};
use crate::quaternion::Quaternion;

/// Dense row-major matrix of quaternions.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<Quaternion>,
}

impl QuatMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        QuatMatrix { n_rows, n_cols, entries: vec![Quaternion::ZERO; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QuatMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_row_major(n_rows: usize, n_cols: usize, entries: Vec<Quaternion>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(QrootError::DimensionMismatch("matrix must be non-empty".into()));
        }
        if entries.len() != n_rows * n_cols {
            return Err(QrootError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                n_rows,
                n_cols
            )));
        }
        Ok(QuatMatrix { n_rows, n_cols, entries })
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                entries.push(f(i, j));
            }
        }
        QuatMatrix { n_rows, n_cols, entries }
    }

    pub fn diag(d: &[Quaternion]) -> Self {
        let mut m = QuatMatrix::zeros(d.len(), d.len());
        for (i, &q) in d.iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QuatMatrix {
        QuatMatrix::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> QuatMatrix {
        QuatMatrix { entries: self.entries.iter().map(|q| q.scale(s)).collect(), ..*self }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|q| q.is_finite())
    }

    /// `‖X − X*‖_F`.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self - &self.adjoint()).frobenius_norm()
    }

    pub fn try_mul(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        if self.n_cols != rhs.n_rows {
            return Err(QrootError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
            )));
        }
        let mut out = QuatMatrix::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for l in 0..self.n_cols {
                let a = self[(i, l)];
                if a == Quaternion::ZERO {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    out[(i, j)] += a * rhs[(l, j)];
                }
            }
        }
        Ok(out)
    }

    /// `self^m` by binary powering; `m = 0` gives the identity.
    pub fn pow(&self, m: u32) -> Result<QuatMatrix> {
        if !self.is_square() {
            return Err(QrootError::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut result = QuatMatrix::identity(self.n_rows);
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Inverse by Gauss-Jordan elimination in quaternion arithmetic.
    ///
    /// All row operations multiply from the left, so the result is a left inverse,
    /// which over a division ring is also a right inverse.
    pub fn inverse(&self) -> Result<QuatMatrix> {
        if !self.is_square() {
            return Err(QrootError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.n_rows;
        let mut a = self.clone();
        let mut inv = QuatMatrix::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot =
                (col..n).max_by(|&p, &q| a[(p, col)].norm().total_cmp(&a[(q, col)].norm())).expect("non-empty range");
            let pivot_abs = a[(pivot, col)].norm();
            if pivot_abs <= 1e-14 * scale {
                return Err(QrootError::Singular(pivot_abs / scale));
            }
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p_inv = a[(col, col)].inv().expect("nonzero pivot");
            for j in 0..n {
                a[(col, j)] = p_inv * a[(col, j)];
                inv[(col, j)] = p_inv * inv[(col, j)];
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == Quaternion::ZERO {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * ac;
                    inv[(r, j)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.n_cols {
            self.entries.swap(r1 * self.n_cols + j, r2 * self.n_cols + j);
        }
    }
}

impl Index<(usize, usize)> for QuatMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.entries[i * self.n_cols + j]
    }
}

impl IndexMut<(usize, usize)> for QuatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.entries[i * self.n_cols + j]
    }
}

impl Add for &QuatMatrix {
    type Output = QuatMatrix;
    fn add(self, rhs: &QuatMatrix) -> QuatMatrix {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols), "shape mismatch in add");
        QuatMatrix { entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| *a + *b).collect(), ..*self }
    }
}

impl Sub for &QuatMatrix {
    type Output = QuatMatrix;
    fn sub(self, rhs: &QuatMatrix) -> QuatMatrix {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols), "shape mismatch in sub");
        QuatMatrix { entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| *a - *b).collect(), ..*self }
    }
}

impl Mul for &QuatMatrix {
    type Output = QuatMatrix;
    fn mul(self, rhs: &QuatMatrix) -> QuatMatrix {
        self.try_mul(rhs).expect("shape mismatch in mul")
    }
}
