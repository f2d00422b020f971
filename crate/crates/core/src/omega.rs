//! The complex representation of quaternion matrices.
//!
//! A quaternion matrix `A = A1 + j A2` with `A1, A2 ∈ ℂ^{n×n}` is represented by
//!
//! ```text
//!     ω(A) = [  A1   conj(A2) ]
//!            [ −A2   conj(A1) ]
//! ```
//!
//! and `Ω_{2n}` is the image of this map. `ω` is an isomorphism of real algebras
//! that commutes with the conjugate transpose.

use std::ops::Mul;

use crate::error::{QrootError, Result};
use crate::linalg::{self, CMat, CVec};
use crate::quat_matrix::QuatMatrix;
use crate::quaternion::Quaternion;

/// Relative factor of the default membership tolerance.
pub const OMEGA_TOL_FACTOR: f64 = 1e-10;

/// A `2n × 2n` complex matrix known to lie in `Ω_{2n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaMatrix {
    half_n: usize,
    data: CMat,
}

/// Default membership tolerance `1e−10 · max(1, ‖M‖_∞)`.
pub fn default_omega_tol(m: &CMat) -> f64 {
    OMEGA_TOL_FACTOR * linalg::inf_norm(m).max(1.0)
}

/// The nearest member of `Ω_{2n}`, obtained by averaging the two copies of each
/// determining block.
fn nearest_member(m: &CMat) -> CMat {
    let n = m.nrows() / 2;
    let mut out = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let a1 = (m[(i, j)] + m[(n + i, n + j)].conj()) * 0.5;
            let a2 = (-m[(n + i, j)] + m[(i, n + j)].conj()) * 0.5;
            out[(i, j)] = a1;
            out[(n + i, n + j)] = a1.conj();
            out[(n + i, j)] = -a2;
            out[(i, n + j)] = a2.conj();
        }
    }
    out
}

/// Maximum entrywise deviation of `m` from the nearest member of `Ω_{2n}`.
pub fn omega_membership(m: &CMat) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(QrootError::DimensionMismatch(format!("{}x{} is not square", m.nrows(), m.ncols())));
    }
    if m.nrows() % 2 == 1 {
        return Err(QrootError::OddDimension(m.nrows()));
    }
    let near = nearest_member(m);
    Ok(linalg::max_abs(&(m - near)))
}

/// The antilinear map `(x; y) ↦ (−conj y; conj x)`.
///
/// Column `n + l` of any member of `Ω_{2n}` is `tau` of column `l`, members of
/// `Ω_{2n}` commute with `tau`, and `tau² = −1`.
pub fn tau(v: &CVec) -> CVec {
    let n = v.len() / 2;
    CVec::from_fn(2 * n, |i, _| if i < n { -v[n + i].conj() } else { v[i - n].conj() })
}

/// Applies [`tau`] to every column.
pub fn tau_columns(m: &CMat) -> CMat {
    let n = m.nrows() / 2;
    CMat::from_fn(2 * n, m.ncols(), |i, j| if i < n { -m[(n + i, j)].conj() } else { m[(i - n, j)].conj() })
}

impl OmegaMatrix {
    /// Wraps a complex matrix after checking membership at `tol`.
    ///
    /// The stored matrix is the symmetrized nearest member, so the structure
    /// holds exactly afterwards.
    pub fn from_complex(m: &CMat, tol: f64) -> Result<Self> {
        let residual = omega_membership(m)?;
        if residual > tol {
            return Err(QrootError::NotInOmega { residual, tolerance: tol });
        }
        Ok(OmegaMatrix { half_n: m.nrows() / 2, data: nearest_member(m) })
    }

    /// Like [`OmegaMatrix::from_complex`] with the default tolerance.
    pub fn from_complex_default(m: &CMat) -> Result<Self> {
        Self::from_complex(m, default_omega_tol(m))
    }

    /// Builds `[V | tau(V)]` from the first `n` columns.
    pub fn from_first_half(v: &CMat) -> Result<Self> {
        if v.nrows() != 2 * v.ncols() {
            return Err(QrootError::DimensionMismatch(format!(
                "first half must be 2n x n, got {}x{}",
                v.nrows(),
                v.ncols()
            )));
        }
        let n = v.ncols();
        let mut data = CMat::zeros(2 * n, 2 * n);
        data.view_mut((0, 0), (2 * n, n)).copy_from(v);
        data.view_mut((0, n), (2 * n, n)).copy_from(&tau_columns(v));
        Ok(OmegaMatrix { half_n: n, data })
    }

    /// `ω(A1 + j A2)` from the two complex coordinate matrices.
    pub fn from_blocks(a1: &CMat, a2: &CMat) -> Result<Self> {
        let n = a1.nrows();
        if a1.shape() != (n, n) || a2.shape() != (n, n) {
            return Err(QrootError::DimensionMismatch("A1 and A2 must be square of equal size".into()));
        }
        let mut data = CMat::zeros(2 * n, 2 * n);
        data.view_mut((0, 0), (n, n)).copy_from(a1);
        data.view_mut((0, n), (n, n)).copy_from(&a2.map(|z| z.conj()));
        data.view_mut((n, 0), (n, n)).copy_from(&(-a2));
        data.view_mut((n, n), (n, n)).copy_from(&a1.map(|z| z.conj()));
        Ok(OmegaMatrix { half_n: n, data })
    }

    /// `ω(A1)`: the member with `A2 = 0`, i.e. `A1 ⊕ conj(A1)`.
    pub fn from_complex_copy(a1: &CMat) -> Self {
        let n = a1.nrows();
        Self::from_blocks(a1, &CMat::zeros(n, n)).expect("square block")
    }

    pub fn identity(n: usize) -> Self {
        OmegaMatrix { half_n: n, data: CMat::identity(2 * n, 2 * n) }
    }

    pub fn half_n(&self) -> usize {
        self.half_n
    }

    pub fn dim(&self) -> usize {
        2 * self.half_n
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.data
    }

    pub fn into_matrix(self) -> CMat {
        self.data
    }

    /// Top-left block `A1`.
    pub fn a1(&self) -> CMat {
        self.data.view((0, 0), (self.half_n, self.half_n)).into_owned()
    }

    /// Negated bottom-left block `A2`.
    pub fn a2(&self) -> CMat {
        -self.data.view((self.half_n, 0), (self.half_n, self.half_n)).into_owned()
    }

    pub fn adjoint(&self) -> Self {
        OmegaMatrix { half_n: self.half_n, data: self.data.adjoint() }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = linalg::inverse(&self.data)?;
        Ok(OmegaMatrix { half_n: self.half_n, data: nearest_member(&inv) })
    }

    pub fn pow(&self, m: u32) -> Self {
        OmegaMatrix { half_n: self.half_n, data: linalg::mat_pow(&self.data, m) }
    }

    pub fn frobenius_norm(&self) -> f64 {
        linalg::frobenius(&self.data)
    }
}

impl Mul for &OmegaMatrix {
    type Output = OmegaMatrix;
    fn mul(self, rhs: &OmegaMatrix) -> OmegaMatrix {
        assert_eq!(self.half_n, rhs.half_n, "Omega dimension mismatch");
        OmegaMatrix { half_n: self.half_n, data: &self.data * &rhs.data }
    }
}

/// `ω_n(A)` for a square quaternion matrix.
pub fn omega_embed(a: &QuatMatrix) -> Result<OmegaMatrix> {
    if !a.is_square() {
        return Err(QrootError::DimensionMismatch(format!(
            "cannot embed a {}x{} quaternion matrix",
            a.n_rows(),
            a.n_cols()
        )));
    }
    let n = a.n_rows();
    let mut data = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (a1, a2) = a[(i, j)].to_complex_pair();
            data[(i, j)] = a1;
            data[(i, n + j)] = a2.conj();
            data[(n + i, j)] = -a2;
            data[(n + i, n + j)] = a1.conj();
        }
    }
    Ok(OmegaMatrix { half_n: n, data })
}

/// Inverse of [`omega_embed`] for a complex matrix in `Ω_{2n}` up to `tol`.
pub fn omega_extract(m: &CMat, tol: f64) -> Result<QuatMatrix> {
    let om = OmegaMatrix::from_complex(m, tol)?;
    Ok(omega_to_quat(&om))
}

/// Reads the quaternion matrix off a member of `Ω_{2n}`.
pub fn omega_to_quat(m: &OmegaMatrix) -> QuatMatrix {
    let n = m.half_n;
    let d = &m.data;
    QuatMatrix::from_fn(n, n, |i, j| Quaternion::from_complex_pair(d[(i, j)], -d[(n + i, j)]))
}

/// `‖HA − A*H‖_F / max(1, ‖H‖_F ‖A‖_F)`.
///
/// `h` must be Hermitian and invertible.
pub fn selfadjoint_residual(h: &CMat, a: &CMat) -> Result<f64> {
    check_hermitian_invertible(h)?;
    if a.shape() != h.shape() {
        return Err(QrootError::DimensionMismatch(format!(
            "H is {}x{} but A is {}x{}",
            h.nrows(),
            h.ncols(),
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(selfadjoint_residual_unchecked(h, a))
}

pub(crate) fn selfadjoint_residual_unchecked(h: &CMat, a: &CMat) -> f64 {
    let num = linalg::frobenius(&(h * a - a.adjoint() * h));
    num / (linalg::frobenius(h) * linalg::frobenius(a)).max(1.0)
}

/// Hermitian tolerance factor and the smallest accepted reciprocal condition number.
pub const HERMITIAN_TOL_FACTOR: f64 = 1e-10;
pub const MIN_RCOND: f64 = 1e-12;

pub(crate) fn check_hermitian_invertible(h: &CMat) -> Result<()> {
    if h.nrows() != h.ncols() {
        return Err(QrootError::DimensionMismatch("H must be square".into()));
    }
    let herm = linalg::frobenius(&(h - h.adjoint()));
    if herm > HERMITIAN_TOL_FACTOR * linalg::frobenius(h).max(1.0) {
        return Err(QrootError::NotHermitian(herm));
    }
    let rc = linalg::rcond(h);
    if rc < MIN_RCOND {
        return Err(QrootError::Singular(rc));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn q1(q: Quaternion) -> QuatMatrix {
        QuatMatrix::from_row_major(1, 1, vec![q]).unwrap()
    }

    #[test]
    fn embed_basic_units() {
        assert_eq!(omega_embed(&q1(Quaternion::ONE)).unwrap().into_matrix(), CMat::identity(2, 2));
        let j = omega_embed(&q1(Quaternion::J)).unwrap().into_matrix();
        assert_eq!(j, CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]));
        let i = omega_embed(&q1(Quaternion::I)).unwrap().into_matrix();
        assert_eq!(i, CMat::from_row_slice(2, 2, &[c(0., 1.), c(0., 0.), c(0., 0.), c(0., -1.)]));
    }

    #[test]
    fn extract_inverts_embed() {
        let tol = 1e-10;
        assert_eq!(omega_extract(&CMat::identity(2, 2), tol).unwrap(), q1(Quaternion::ONE));
        let j = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]);
        assert_eq!(omega_extract(&j, tol).unwrap(), q1(Quaternion::J));
    }

    #[test]
    fn extract_rejects_non_member() {
        let m = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        match omega_extract(&m, 1e-10) {
            Err(QrootError::NotInOmega { residual, .. }) => assert_eq!(residual, 1.0),
            other => panic!("expected NotInOmega, got {other:?}"),
        }
    }

    #[test]
    fn membership_values() {
        assert_eq!(omega_membership(&CMat::identity(4, 4)).unwrap(), 0.0);
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(0., 1.), c(0., 1.)]));
        assert_eq!(omega_membership(&m).unwrap(), 1.0);
        assert!(matches!(omega_membership(&CMat::identity(3, 3)), Err(QrootError::OddDimension(3))));
    }

    #[test]
    fn tau_matches_second_half_columns() {
        let a = QuatMatrix::from_fn(3, 3, |i, j| Quaternion::new(i as f64, j as f64 - 1.0, (i * j) as f64, 0.5));
        let om = omega_embed(&a).unwrap();
        let m = om.as_matrix();
        for l in 0..3 {
            let t = tau(&m.column(l).into_owned());
            assert_eq!(t, m.column(3 + l).into_owned());
        }
        let v = m.column(1).into_owned();
        assert_eq!(tau(&tau(&v)), -v);
    }

    #[test]
    fn selfadjoint_residual_examples() {
        let id = CMat::identity(2, 2);
        let herm = CMat::from_row_slice(2, 2, &[c(1., 0.), c(2., 1.), c(2., -1.), c(-3., 0.)]);
        assert!(selfadjoint_residual(&id, &herm).unwrap() < 1e-15);

        let h = CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let a = CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., 1.), c(0., 1.), c(0., 0.)]);
        assert_eq!(selfadjoint_residual(&h, &a).unwrap(), 0.0);

        // HA − A*H = [[0,1],[−1,0]], normalized by ‖I₂‖_F ‖A‖_F = √2
        let a = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        let r = selfadjoint_residual(&id, &a).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn selfadjoint_residual_errors() {
        let a = CMat::identity(2, 2);
        let not_herm = CMat::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(selfadjoint_residual(&not_herm, &a), Err(QrootError::NotHermitian(_))));
        let singular = CMat::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(1., 0.), c(1., 0.)]);
        assert!(matches!(selfadjoint_residual(&singular, &a), Err(QrootError::Singular(_))));
        assert!(matches!(
            selfadjoint_residual(&CMat::identity(2, 2), &CMat::identity(4, 4)),
            Err(QrootError::DimensionMismatch(_))
        ));
    }
}
