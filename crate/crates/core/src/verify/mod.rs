//! Independent checks of computed roots and seeded test instances.

mod generator;

pub use generator::{random_instance, EigenClass, Force, Instance, Profile};

use num_complex::Complex64;

use crate::canonical::{jordan_block, segre_characteristic_default, SegreSequence};
use crate::error::{QrootError, Result};
use crate::linalg;
use crate::omega::{self, OMEGA_TOL_FACTOR};
use crate::quat_matrix::QuatMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    /// `‖A^m − B‖_F / max(1, ‖B‖_F)`.
    pub residual_power: f64,
    /// `‖HA − A*H‖_F / max(1, ‖H‖_F ‖A‖_F)`.
    pub residual_selfadjoint: f64,
    /// Relative distance of `ω(A)` from `Ω_{2n}`.
    pub omega_residual: f64,
    pub passed: bool,
    pub tolerance: f64,
    pub omega_tolerance: f64,
}

/// Power and selfadjointness residuals of `A` as normalized in [`VerificationReport`].
pub(crate) fn quaternion_residuals(a: &QuatMatrix, b: &QuatMatrix, h: &QuatMatrix, m: usize) -> Result<(f64, f64)> {
    let pw = a.pow(m as u32)?;
    let power = (&pw - b).frobenius_norm() / b.frobenius_norm().max(1.0);
    let lhs = h.try_mul(a)?;
    let rhs = a.adjoint().try_mul(h)?;
    let sa = (&lhs - &rhs).frobenius_norm() / (h.frobenius_norm() * a.frobenius_norm()).max(1.0);
    Ok((power, sa))
}

/// Checks `A^m = B` and `HA = A*H` in quaternion arithmetic, within `tol`.
pub fn verify_root(a: &QuatMatrix, b: &QuatMatrix, h: &QuatMatrix, m: usize, tol: f64) -> Result<VerificationReport> {
    let n = a.n_rows();
    for (name, x) in [("A", a), ("B", b), ("H", h)] {
        if x.n_rows() != n || x.n_cols() != n {
            return Err(QrootError::DimensionMismatch(format!(
                "{name} is {}x{}, expected {n}x{n}",
                x.n_rows(),
                x.n_cols()
            )));
        }
    }
    if m == 0 {
        return Err(QrootError::SpecInvalid("m must be at least 1".into()));
    }
    let (residual_power, residual_selfadjoint) = quaternion_residuals(a, b, h, m)?;
    let wa = omega::omega_embed(a)?;
    let omega_residual = omega::omega_membership(wa.as_matrix())? / linalg::max_abs(wa.as_matrix()).max(1.0);
    let passed = residual_power <= tol && residual_selfadjoint <= tol && omega_residual <= OMEGA_TOL_FACTOR;
    Ok(VerificationReport {
        residual_power,
        residual_selfadjoint,
        omega_residual,
        passed,
        tolerance: tol,
        omega_tolerance: OMEGA_TOL_FACTOR,
    })
}

/// Segre characteristic of `J_k(0)^m`, from `k = a·m + r` and from the rank
/// staircase; the two must agree.
pub fn power_segre_oracle(k: usize, m: usize) -> Result<SegreSequence> {
    if k == 0 || m == 0 {
        return Err(QrootError::SizeMismatch("k and m must be positive".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    let (a, r) = (k / m, k % m);
    let mut parts = vec![a + 1; r];
    parts.extend(std::iter::repeat_n(a, m - r));
    let closed = SegreSequence::new(zero, parts);
    let power = linalg::mat_pow(&jordan_block(zero, k), m as u32);
    let staircase = segre_characteristic_default(&power, zero)?;
    if closed != staircase {
        return Err(QrootError::OracleDisagreement(format!(
            "k = {k}, m = {m}: closed form {:?}, staircase {:?}",
            closed.parts, staircase.parts
        )));
    }
    Ok(closed)
}
