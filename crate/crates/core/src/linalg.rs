//! Dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{QrootError, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum absolute row sum.
pub fn inf_norm(m: &CMat) -> f64 {
    m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn real_matrix(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> CMat {
    CMat::from_fn(rows, cols, |i, j| c(f(i, j), 0.0))
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[CMat]) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let (mut r, mut k) = (0, 0);
    for b in blocks {
        out.view_mut((r, k), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        k += b.ncols();
    }
    out
}

/// `m^p` by binary powering.
pub fn mat_pow(m: &CMat, p: u32) -> CMat {
    let n = m.nrows();
    let mut result = CMat::identity(n, n);
    let mut base = m.clone();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Full singular value decomposition with singular values sorted in
/// decreasing order. Returns `(U, σ, V)` with `m = U diag(σ) V*` and
/// `V` square (`ncols × ncols`).
pub fn svd_full(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (r, k) = m.shape();
    // nalgebra returns a thin SVD; pad wide inputs with zero rows so V is square.
    let padded;
    let work = if r < k {
        let mut p = CMat::zeros(k, k);
        p.view_mut((0, 0), (r, k)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let svd = work.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u_sorted = CMat::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]);
    let v = CMat::from_fn(v_t.ncols(), order.len(), |i, j| v_t[(order[j], i)].conj());
    if r < k {
        // rows past r are padding; zero singular values carry no information in U
        return (u_sorted.view((0, 0), (r, r)).into_owned(), sigma[..r].to_vec(), v);
    }
    (u_sorted, sigma, v)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank at an absolute threshold.
///
/// Fails with `RankAmbiguous` when a singular value falls within a factor 10
/// of the threshold on either side.
pub fn rank_checked(m: &CMat, threshold: f64) -> Result<usize> {
    let s = singular_values(m);
    for &sigma in &s {
        if sigma > threshold / 10.0 && sigma < threshold * 10.0 {
            return Err(QrootError::RankAmbiguous { sigma, threshold });
        }
    }
    Ok(s.iter().filter(|&&x| x > threshold).count())
}

/// Orthonormal basis of the right nullspace of `m`, assuming its dimension is `dim`.
pub fn nullspace(m: &CMat, dim: usize) -> CMat {
    let (_, _, v) = svd_full(m);
    let k = v.ncols();
    v.columns(k - dim, dim).into_owned()
}

/// Reciprocal 2-norm condition number (`σ_min / σ_max`).
pub fn rcond(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    let rc = rcond(m);
    if !(rc > 1e-14) {
        return Err(QrootError::Singular(rc));
    }
    m.clone().try_inverse().ok_or(QrootError::Singular(rc))
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(h.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Complex Schur form `m = Q T Q*` with `T` upper triangular.
///
/// The deflation test of the QR iteration is relative to the diagonal, which
/// can stall near zero eigenvalues; on failure the matrix is shifted, and then
/// rotated by fixed unitaries, before retrying.
pub fn schur(m: &CMat) -> Result<(CMat, CMat)> {
    let n = m.nrows();
    let shift = c(frobenius(m) + 1.0, 0.0);
    let id = CMat::identity(n, n);
    let attempt = |a: CMat| Schur::try_new(a, f64::EPSILON, 10_000).map(|s| s.unpack());
    let (q, mut t) = if let Some(qt) = attempt(m.clone()) {
        qt
    } else if let Some((q, t)) = attempt(m + &id * shift) {
        (q, t - &id * shift)
    } else {
        let mut found = None;
        for seed in 1..=3 {
            let u = fixed_unitary(n, seed as f64);
            let rotated = u.adjoint() * m * &u + &id * shift;
            if let Some((q, t)) = attempt(rotated) {
                found = Some((u * q, t - &id * shift));
                break;
            }
        }
        found.ok_or_else(|| QrootError::Numerical("Schur iteration did not converge".into()))?
    };
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = ZERO;
        }
    }
    Ok((q, t))
}

fn fixed_unitary(n: usize, seed: f64) -> CMat {
    let a = CMat::from_fn(n, n, |i, j| c((seed * (i + 2 * j + 1) as f64).sin(), (seed * (3 * i + j) as f64).cos()));
    a.qr().q()
}

/// Swaps the diagonal entries at `k` and `k + 1` of an upper triangular `t`
/// by a unitary rotation, updating `q` so that `Q T Q*` is preserved.
fn swap_adjacent(q: &mut CMat, t: &mut CMat, k: usize) {
    let n = t.nrows();
    let (t11, t22, t12) = (t[(k, k)], t[(k + 1, k + 1)], t[(k, k + 1)]);
    // eigenvector of the 2x2 block for t22
    let x1 = t12;
    let x2 = t22 - t11;
    let nrm = (x1.norm_sqr() + x2.norm_sqr()).sqrt();
    if nrm == 0.0 {
        return;
    }
    let (g11, g21) = (x1 / nrm, x2 / nrm);
    let (g12, g22) = (-g21.conj(), g11.conj());
    for i in 0..n {
        let (a, b) = (t[(i, k)], t[(i, k + 1)]);
        t[(i, k)] = a * g11 + b * g21;
        t[(i, k + 1)] = a * g12 + b * g22;
        let (a, b) = (q[(i, k)], q[(i, k + 1)]);
        q[(i, k)] = a * g11 + b * g21;
        q[(i, k + 1)] = a * g12 + b * g22;
    }
    for j in 0..n {
        let (a, b) = (t[(k, j)], t[(k + 1, j)]);
        t[(k, j)] = g11.conj() * a + g21.conj() * b;
        t[(k + 1, j)] = g12.conj() * a + g22.conj() * b;
    }
    t[(k + 1, k)] = ZERO;
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
}

/// Reorders a complex Schur form so that the diagonal entries flagged by
/// `select` come first. Returns the number of selected entries.
pub fn reorder_schur(q: &mut CMat, t: &mut CMat, select: impl Fn(Complex64) -> bool) -> usize {
    let n = t.nrows();
    let mut placed = 0;
    for i in 0..n {
        if select(t[(i, i)]) {
            let mut pos = i;
            while pos > placed {
                swap_adjacent(q, t, pos - 1);
                pos -= 1;
            }
            placed += 1;
        }
    }
    placed
}

/// Orthonormalizes columns by modified Gram-Schmidt (two passes).
pub fn orthonormalize(m: &CMat) -> CMat {
    let mut out = m.clone();
    for j in 0..out.ncols() {
        for _ in 0..2 {
            for i in 0..j {
                let qi = out.column(i).into_owned();
                let proj = qi.dotc(&out.column(j));
                let mut cj = out.column_mut(j);
                cj -= qi * proj;
            }
        }
        let nrm = out.column(j).norm();
        if nrm > 0.0 {
            out.column_mut(j).unscale_mut(nrm);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_full_reconstructs_wide_and_tall() {
        let m = CMat::from_fn(2, 4, |i, j| c((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        let (u, s, v) = svd_full(&m);
        assert_eq!(v.shape(), (4, 4));
        let mut sig = CMat::zeros(2, 4);
        for i in 0..2 {
            sig[(i, i)] = c(s[i], 0.0);
        }
        let back = &u * sig * v.adjoint();
        assert!(frobenius(&(back - &m)) < 1e-12);
        let ns = nullspace(&m, 2);
        assert!(frobenius(&(&m * ns)) < 1e-12);
    }

    #[test]
    fn schur_reordering_moves_selected_eigenvalues() {
        let m = CMat::from_fn(4, 4, |i, j| c(((i * 7 + j * 3) % 5) as f64, ((i + j) % 3) as f64 * 0.5));
        let (mut q, mut t) = schur(&m).unwrap();
        let target = t[(3, 3)];
        let k = reorder_schur(&mut q, &mut t, |z| (z - target).norm() < 1e-9);
        assert_eq!(k, 1);
        assert!((t[(0, 0)] - target).norm() < 1e-10);
        let back = &q * &t * q.adjoint();
        assert!(frobenius(&(back - &m)) < 1e-10);
        // invariant subspace
        let v = q.column(0).into_owned();
        let mv = &m * &v;
        assert!((mv - v * t[(0, 0)]).norm() < 1e-10);
    }

    #[test]
    fn rank_checked_flags_ambiguity() {
        let m = real_matrix(2, 2, |i, j| if i == j { [1.0, 5e-8][i] } else { 0.0 });
        assert!(matches!(rank_checked(&m, 1e-8), Err(QrootError::RankAmbiguous { .. })));
        assert_eq!(rank_checked(&m, 1e-3).unwrap(), 1);
    }
}
