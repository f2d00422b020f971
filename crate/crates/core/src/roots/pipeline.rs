use super::builders::{
    assemble_root, root_block_negative_even, root_block_nilpotent, root_block_nonreal, root_block_real, RootPart,
};
use super::gate::{root_exists, same_lambda, RootDecision};
use crate::canonical::{canonicalize_pair, CanonicalBlock, CanonicalSpec, Sign, Tolerances};
use crate::error::{QrootError, Result};
use crate::linalg;
use crate::omega::{self, omega_embed, OmegaMatrix};
use crate::quat_matrix::QuatMatrix;
use crate::verify::quaternion_residuals;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct RootOptions {
    pub tolerances: Tolerances,
    /// Selects `e^{2πi·branch/m}` times the principal root for nonreal and negative-even classes.
    pub branch: i64,
}

#[derive(Clone, Debug)]
pub struct RootResult {
    pub root: OmegaMatrix,
    /// `S` with `S⁻¹ ω(B) S` canonical; the root is `S Â S⁻¹`.
    pub similarity: OmegaMatrix,
    pub spec: CanonicalSpec,
    pub m: usize,
    /// `‖A^m − B‖_F / max(1, ‖B‖_F)` in quaternion arithmetic.
    pub residual_power: f64,
    /// `‖HA − A*H‖_F / max(1, ‖H‖_F ‖A‖_F)` in quaternion arithmetic.
    pub residual_selfadjoint: f64,
    /// Distance of the unsymmetrized Ω-level root from `Ω_{2n}`.
    pub omega_residual: f64,
    /// 2-norm condition number of the similarity.
    pub similarity_condition: f64,
}

impl RootResult {
    pub fn root_quaternion(&self) -> QuatMatrix {
        omega::omega_to_quat(&self.root)
    }
}

#[derive(Clone, Debug)]
pub enum RootOutcome {
    Root(Box<RootResult>),
    NoRoot(RootDecision),
}

fn build_parts(spec: &CanonicalSpec, decision: &RootDecision, m: usize, branch: i64) -> Result<Vec<RootPart>> {
    let mut parts = Vec::new();
    let mut paired = vec![false; spec.blocks.len()];
    for (i, b) in spec.blocks.iter().enumerate() {
        let single =
            |blk: &CanonicalBlock, block: OmegaMatrix| RootPart { block, spec: CanonicalSpec::new(vec![*blk]) };
        if !b.is_real() {
            parts.push(single(b, root_block_nonreal(b.lambda, b.size, m, branch)?));
        } else if b.lambda.re > 0.0 || (b.lambda.re < 0.0 && m % 2 == 1) {
            let sign = b.sign.unwrap_or(Sign::Plus);
            let a1 = root_block_real(b.lambda.re, b.size, sign, m)?;
            parts.push(single(b, OmegaMatrix::from_complex_copy(&a1)));
        } else if b.lambda.re < 0.0 {
            if paired[i] || b.sign != Some(Sign::Plus) {
                continue;
            }
            let partner = (0..spec.blocks.len())
                .find(|&j| {
                    let o = &spec.blocks[j];
                    !paired[j] && o.sign == Some(Sign::Minus) && o.size == b.size && same_lambda(o.lambda, b.lambda)
                })
                .ok_or_else(|| QrootError::Numerical(format!("unpaired negative block at {}", b.lambda.re)))?;
            paired[i] = true;
            paired[partner] = true;
            let mut part = root_block_negative_even(b.lambda.re, b.size, m, branch)?;
            for blk in &mut part.spec.blocks {
                blk.lambda = b.lambda;
            }
            parts.push(part);
        }
    }
    if !decision.tuples.is_empty() {
        parts.push(root_block_nilpotent(&decision.tuples, m)?);
    }
    Ok(parts)
}

/// Computes an `H`-selfadjoint m-th root of `B`, or the certificate that none exists.
pub fn mth_root(b: &QuatMatrix, h: &QuatMatrix, m: usize, opts: &RootOptions) -> Result<RootOutcome> {
    if m == 0 {
        return Err(QrootError::SpecInvalid("m must be at least 1".into()));
    }
    if !b.is_square() || !h.is_square() || b.n_rows() != h.n_rows() {
        return Err(QrootError::DimensionMismatch(format!(
            "B is {}x{} and H is {}x{}",
            b.n_rows(),
            b.n_cols(),
            h.n_rows(),
            h.n_cols()
        )));
    }
    let (bw, hw) = (omega_embed(b)?, omega_embed(h)?);
    let tol = opts.tolerances;
    let canon = canonicalize_pair(&bw, &hw, &tol)?;
    let decision = root_exists(&canon.spec, m)?;
    if !decision.exists {
        return Ok(RootOutcome::NoRoot(decision));
    }

    let (root_w, omega_residual) = if m == 1 {
        (bw.clone(), 0.0)
    } else {
        let parts = build_parts(&canon.spec, &decision, m, opts.branch)?;
        let a_hat = assemble_root(&parts, &canon.spec)?;
        let s = canon.similarity.as_matrix();
        let raw = s * a_hat.as_matrix() * linalg::inverse(s)?;
        let dev = omega::omega_membership(&raw)?;
        (OmegaMatrix::from_complex(&raw, f64::INFINITY)?, dev / linalg::max_abs(&raw).max(1.0))
    };
    let a = omega::omega_to_quat(&root_w);
    let (residual_power, residual_selfadjoint) = quaternion_residuals(&a, b, h, m)?;
    if !(residual_power <= tol.residual && residual_selfadjoint <= tol.residual) {
        return Err(QrootError::Numerical(format!(
            "root residuals {residual_power:.3e} / {residual_selfadjoint:.3e} exceed {:.1e}",
            tol.residual
        )));
    }
    let sv = linalg::singular_values(canon.similarity.as_matrix());
    let similarity_condition = sv[0] / sv[sv.len() - 1];
    Ok(RootOutcome::Root(Box::new(RootResult {
        root: root_w,
        similarity: canon.similarity,
        spec: canon.spec,
        m,
        residual_power,
        residual_selfadjoint,
        omega_residual,
        similarity_condition,
    })))
}
