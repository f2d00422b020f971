use std::f64::consts::PI;

use num_complex::Complex64;

use super::gate::{same_lambda, sign_pattern_check, MTuple};
use crate::canonical::canonicalize::{hankel_coefficients, series_sqrt};
use crate::canonical::{
    canonical_order, canonicalize_pair, jordan_block, sip_matrix, CanonicalBlock, CanonicalSpec, Sign, Tolerances,
};
use crate::error::{QrootError, Result};
use crate::linalg::{self, c, CMat, CVec};
use crate::omega::OmegaMatrix;

/// An Ω-level root of the canonical pair described by `spec`.
#[derive(Clone, Debug)]
pub struct RootPart {
    pub block: OmegaMatrix,
    pub spec: CanonicalSpec,
}

/// `(N'^s)_{1,n}` for `s = 0..n` with `N' = J_n(μ)^m − λI`, and `N'` itself.
fn shifted_power_corner(mu: Complex64, lambda: Complex64, m: usize, n: usize) -> (Vec<Complex64>, CMat) {
    let np = linalg::mat_pow(&jordan_block(mu, n), m as u32) - CMat::identity(n, n) * lambda;
    let mut f = Vec::with_capacity(n);
    let mut pw = CMat::identity(n, n);
    for s in 0..n {
        if s > 0 {
            pw = &pw * &np;
        }
        f.push(pw[(0, n - 1)]);
    }
    (f, np)
}

fn generator(np: &CMat, p: &[Complex64]) -> CVec {
    let n = np.nrows();
    let mut e = CVec::zeros(n);
    e[n - 1] = linalg::ONE;
    let mut acc = &e * p[0];
    let mut pw = e;
    for &cq in &p[1..] {
        pw = np * pw;
        acc += &pw * cq;
    }
    acc
}

fn chain_matrix(np: &CMat, y: &CVec) -> CMat {
    let n = np.nrows();
    let mut cols = vec![y.clone()];
    for _ in 1..n {
        let next = np * cols.last().expect("non-empty");
        cols.push(next);
    }
    cols.reverse();
    CMat::from_columns(&cols)
}

/// Real `y` with `yᵀ Q_n N'^s y = δ_{s,n−1}`, where `N' = J_n(μ)^m − λI`.
///
/// The Jordan chain `[N'^{n−1}y, …, N'y, y]` is then `Q_n`-unitary.
pub fn solve_hankel_normalization(mu: f64, lambda: f64, m: usize, n: usize) -> Result<Vec<f64>> {
    if n == 0 || m == 0 {
        return Err(QrootError::SizeMismatch("n and m must be positive".into()));
    }
    let (f, np) = shifted_power_corner(c(mu, 0.0), c(lambda, 0.0), m, n);
    let g = hankel_coefficients(&f, linalg::ONE)?;
    if g[0].re < 0.0 {
        return Err(QrootError::NoRealSolution(format!("leading coefficient {:.3e} is negative", g[0].re)));
    }
    let p = series_sqrt(&g.iter().map(|z| c(z.re, 0.0)).collect::<Vec<_>>());
    Ok(generator(&np, &p).iter().map(|z| z.re).collect())
}

/// Complex `y` with `yᵀ Q_n N'^s y = δ_{s,n−1}` (transpose, no conjugation).
pub fn solve_bilinear_normalization(mu: Complex64, lambda: Complex64, m: usize, n: usize) -> Result<CVec> {
    if n == 0 || m == 0 {
        return Err(QrootError::SizeMismatch("n and m must be positive".into()));
    }
    let (f, np) = shifted_power_corner(mu, lambda, m, n);
    let g = hankel_coefficients(&f, linalg::ONE)?;
    Ok(generator(&np, &series_sqrt(&g)))
}

/// Per-copy `A₁` with `A₁^m = J_k(λ)` and `Q_k A₁ = A₁* Q_k`, for `λ > 0`, or
/// `λ < 0` with `m` odd. The block is the same for either sign `η`.
pub fn root_block_real(lambda: f64, k: usize, _eta: Sign, m: usize) -> Result<CMat> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(QrootError::ClassMismatch(format!("real builder needs a nonzero eigenvalue, got {lambda}")));
    }
    if lambda < 0.0 && m.is_multiple_of(2) {
        return Err(QrootError::ClassMismatch(format!("{lambda} has no real root of even order {m}")));
    }
    let mu = lambda.signum() * lambda.abs().powf(1.0 / m as f64);
    let y = solve_hankel_normalization(mu, lambda, m, k)?;
    let np = linalg::mat_pow(&jordan_block(c(mu, 0.0), k), m as u32) - CMat::identity(k, k) * c(lambda, 0.0);
    let p1 = chain_matrix(&np, &CVec::from_iterator(k, y.iter().map(|&v| c(v, 0.0))));
    let a1 = linalg::inverse(&p1)? * jordan_block(c(mu, 0.0), k) * &p1;
    Ok(a1.map(|z| c(z.re, 0.0)))
}

/// `μ = |λ|^{1/m} e^{i(arg λ + 2π·branch)/m}`.
fn branch_root(lambda: Complex64, m: usize, branch: i64) -> Complex64 {
    let arg = if lambda.im == 0.0 && lambda.re < 0.0 { PI } else { lambda.arg() };
    let theta = (arg + 2.0 * PI * branch.rem_euclid(m as i64) as f64) / m as f64;
    Complex64::from_polar(lambda.norm().powf(1.0 / m as f64), theta)
}

/// Ω-level root of the canonical nonreal block `(λ, k)`, `Im λ > 0`.
///
/// Per copy this is `(P₁ ⊕ conj P₁)⁻¹ (J_k(μ) ⊕ J_k(conj μ)) (P₁ ⊕ conj P₁)` with
/// `P₁ᵀ Q_k P₁ = Q_k`.
pub fn root_block_nonreal(lambda: Complex64, k: usize, m: usize, branch: i64) -> Result<OmegaMatrix> {
    if !(lambda.im > 0.0) {
        return Err(QrootError::ClassMismatch(format!("nonreal builder needs Im λ > 0, got {lambda}")));
    }
    let mu = branch_root(lambda, m, branch);
    let y = solve_bilinear_normalization(mu, lambda, m, k)?;
    let np = linalg::mat_pow(&jordan_block(mu, k), m as u32) - CMat::identity(k, k) * lambda;
    let p1 = chain_matrix(&np, &y);
    let p = linalg::direct_sum(&[p1.clone(), p1.map(|z| z.conj())]);
    let j = linalg::direct_sum(&[jordan_block(mu, k), jordan_block(mu.conj(), k)]);
    let a1 = linalg::inverse(&p)? * j * &p;
    Ok(OmegaMatrix::from_complex_copy(&a1))
}

fn canonicalize_known(power: &CMat, h1: &CMat) -> Result<(OmegaMatrix, CanonicalSpec)> {
    let b = OmegaMatrix::from_complex_copy(power);
    let h = OmegaMatrix::from_complex_copy(h1);
    let out = canonicalize_pair(&b, &h, &Tolerances::default())?;
    Ok((out.similarity, out.spec))
}

/// Ω-level root of the canonical pair `(λ,k,+), (λ,k,−)` for `λ < 0`, `m` even.
pub fn root_block_negative_even(lambda: f64, k: usize, m: usize, branch: i64) -> Result<RootPart> {
    if !(lambda < 0.0) || m % 2 == 1 {
        return Err(QrootError::ClassMismatch(format!(
            "negative-even builder needs λ < 0 and even m, got λ = {lambda}, m = {m}"
        )));
    }
    let mu = branch_root(c(lambda, 0.0), m, branch);
    let (jm, jc) = (jordan_block(mu, k), jordan_block(mu.conj(), k));
    let r1 = linalg::direct_sum(&[jm, jc]);
    let power = linalg::mat_pow(&r1, m as u32);
    let (s, spec) = canonicalize_known(&power, &sip_matrix(2 * k))?;
    let expected = CanonicalSpec::new(vec![
        CanonicalBlock::real(lambda, k, Sign::Plus),
        CanonicalBlock::real(lambda, k, Sign::Minus),
    ]);
    if !spec.matches(&expected, 1e-6 * lambda.abs().max(1.0)) {
        return Err(QrootError::Numerical(format!("power of the nonreal root canonicalized to {spec:?}")));
    }
    let block = &(&s.inverse()? * &OmegaMatrix::from_complex_copy(&r1)) * &s;
    Ok(RootPart { block, spec: expected })
}

/// Ω-level root of the zero-eigenvalue blocks described by `tuples`.
///
/// Each tuple contributes a conjugate of `J_t(0)` with `t = a·m + r`, whose
/// m-th power carries the tuple's blocks.
pub fn root_block_nilpotent(tuples: &[MTuple], m: usize) -> Result<RootPart> {
    let (ok, per) = sign_pattern_check(tuples, m);
    if !ok {
        let bad = per.iter().position(Option::is_none).unwrap_or(0);
        return Err(QrootError::SignPatternViolation(format!("tuple {bad} violates the sign rule")));
    }
    let mut parts = Vec::with_capacity(tuples.len());
    for (tu, eta) in tuples.iter().zip(per) {
        let eta = eta.expect("checked above");
        let t = tu.t(m);
        let j = jordan_block(linalg::ZERO, t);
        let (s, spec) = canonicalize_known(&linalg::mat_pow(&j, m as u32), &(sip_matrix(t) * c(eta.as_f64(), 0.0)))?;
        let mut want: Vec<(usize, i64)> = tu.blocks().iter().map(|&(k, s)| (k, s.as_i64())).collect();
        let mut got: Vec<(usize, i64)> = spec.blocks.iter().map(|b| (b.size, b.sign.map_or(0, Sign::as_i64))).collect();
        want.sort_unstable();
        got.sort_unstable();
        if want != got || spec.blocks.iter().any(|b| !b.is_real() || b.lambda.re != 0.0) {
            return Err(QrootError::Numerical(format!(
                "power of J_{t}(0) canonicalized to {got:?}, expected {want:?}"
            )));
        }
        let block = &(&s.inverse()? * &OmegaMatrix::from_complex_copy(&j)) * &s;
        parts.push(RootPart { block, spec });
    }
    let mut all: Vec<CanonicalBlock> = parts.iter().flat_map(|p| p.spec.blocks.iter().copied()).collect();
    all.sort_by(canonical_order);
    let spec = CanonicalSpec::new(all);
    let block = assemble_root(&parts, &spec)?;
    Ok(RootPart { block, spec })
}

fn block_matches(a: &CanonicalBlock, b: &CanonicalBlock) -> bool {
    a.size == b.size && a.sign == b.sign && a.is_real() == b.is_real() && same_lambda(a.lambda, b.lambda)
}

/// Places Ω-level part roots into the per-copy layout of `spec`.
///
/// Every block of every part is matched to an unused block of `spec` with the
/// same eigenvalue, size and sign; the parts must cover `spec` exactly.
pub fn assemble_root(parts: &[RootPart], spec: &CanonicalSpec) -> Result<OmegaMatrix> {
    let n = spec.half_dim();
    let offsets = spec.offsets();
    let mut used = vec![false; spec.blocks.len()];
    let mut out = CMat::zeros(2 * n, 2 * n);
    for part in parts {
        let d = part.spec.half_dim();
        if part.block.half_n() != d {
            return Err(QrootError::DimensionMismatch(format!(
                "part root has half size {} but its spec has {d}",
                part.block.half_n()
            )));
        }
        let mut idx = Vec::with_capacity(d);
        for blk in &part.spec.blocks {
            let j = (0..spec.blocks.len())
                .find(|&j| !used[j] && block_matches(blk, &spec.blocks[j]))
                .ok_or_else(|| QrootError::DimensionMismatch(format!("no free target block for {blk:?}")))?;
            used[j] = true;
            idx.extend((0..blk.width()).map(|r| offsets[j] + r));
        }
        let p = part.block.as_matrix();
        for a in 0..d {
            for b in 0..d {
                out[(idx[a], idx[b])] = p[(a, b)];
                out[(idx[a], n + idx[b])] = p[(a, d + b)];
                out[(n + idx[a], idx[b])] = p[(d + a, b)];
                out[(n + idx[a], n + idx[b])] = p[(d + a, d + b)];
            }
        }
    }
    if let Some(j) = used.iter().position(|u| !u) {
        return Err(QrootError::DimensionMismatch(format!("target block {j} is not covered by any part")));
    }
    OmegaMatrix::from_complex_default(&out)
}
