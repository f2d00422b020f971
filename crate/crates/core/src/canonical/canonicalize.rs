//! Reduction of an H-selfadjoint pair in `Ω_{2n}` to canonical form.
//!
//! The spectrum is split into clusters on a complex Schur form. For each cluster
//! an orthonormal basis of the root subspace is obtained by reordering the Schur
//! form, and Jordan chains are extracted top-down from the nilpotent part:
//!
//! * real `λ`: a chain generated by `v` with `[N^{k−1}v, v] ≠ 0` is rescaled by a
//!   real polynomial in `N` so its Gram matrix is `η Q_k`; the chain and its image
//!   under `tau` span one block of each copy.
//! * nonreal `λ` (upper half-plane): the bilinear form `β(a, b) = tau(a)* H b` is
//!   alternating on the root subspace and `N` is β-selfadjoint, so chains come in
//!   pairs `(u, w)` normalized to `β(a, N^s b') = δ_{s,k−1}`. The first copy then
//!   holds `u` (for `λ`) and `−tau(w)` (for `conj λ`).
//!
//! After each block, the remaining subspace is the orthogonal complement of the
//! block with respect to the relevant form, which is again invariant.

use num_complex::Complex64;

use super::{canonical_order, materialize_pair, CanonicalBlock, CanonicalSpec, Sign};
use crate::error::{QrootError, Result};
use crate::linalg::{self, c, CMat, CVec};
use crate::omega::{self, tau_columns, OmegaMatrix};

/// Relative tolerances; absolute values are derived per input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Initial clustering radius, relative to `max(1, ‖B‖_F)`.
    pub cluster: f64,
    /// Rank threshold, relative to `max(1, ‖B‖_F)`.
    pub rank: f64,
    /// Accepted residual of the computed similarity.
    pub residual: f64,
    /// Accepted H-selfadjointness residual of the input.
    pub selfadjoint: f64,
    /// Largest accepted spectral projector norm of a cluster.
    pub projector_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { cluster: 1e-6, rank: 1e-8, residual: 1e-8, selfadjoint: 1e-8, projector_max: 1e4 }
    }
}

/// Result of [`canonicalize_pair`]: `S⁻¹ B S` and `S* H S` equal the
/// materialization of `spec` up to the reported residuals.
#[derive(Clone, Debug)]
pub struct CanonicalPair {
    pub similarity: OmegaMatrix,
    pub spec: CanonicalSpec,
    pub residual_similarity: f64,
    pub residual_congruence: f64,
}

/// Computes `S ∈ Ω_{2n}` and the canonical spec of `(b, h)`.
pub fn canonicalize_pair(b: &OmegaMatrix, h: &OmegaMatrix, tol: &Tolerances) -> Result<CanonicalPair> {
    if b.half_n() != h.half_n() {
        return Err(QrootError::DimensionMismatch(format!(
            "B is {}x{} but H is {}x{}",
            b.dim(),
            b.dim(),
            h.dim(),
            h.dim()
        )));
    }
    let (bm, hm) = (b.as_matrix(), h.as_matrix());
    omega::check_hermitian_invertible(hm)?;
    let sa = omega::selfadjoint_residual_unchecked(hm, bm);
    if sa > tol.selfadjoint {
        return Err(QrootError::NotSelfadjoint(sa));
    }

    let scale = linalg::frobenius(bm).max(1.0);
    if let Some(pair) = recognize_canonical(bm, hm, tol.cluster * scale) {
        return Ok(pair);
    }

    let rank_thr = tol.rank * scale;
    let (q, t) = linalg::schur(bm)?;
    let clusters = find_clusters(&q, &t, tol, scale)?;

    let mut pieces: Vec<(CanonicalBlock, CMat)> = Vec::new();
    for cl in clusters.iter().filter(|cl| cl.kind != ClusterKind::Lower) {
        let (mut qc, mut tc) = (q.clone(), t.clone());
        let members = cl.values.clone();
        let d = linalg::reorder_schur(&mut qc, &mut tc, |z| members.contains(&z));
        let basis = qc.columns(0, d).into_owned();
        let found = match cl.kind {
            ClusterKind::Real => real_chains(bm, hm, cl.centroid.re, basis, rank_thr)?,
            ClusterKind::Upper => nonreal_chains(bm, hm, cl.centroid, basis, rank_thr)?,
            ClusterKind::Lower => unreachable!(),
        };
        pieces.extend(found);
    }

    pieces.sort_by(|a, b| canonical_order(&a.0, &b.0));
    let n = b.half_n();
    let mut first_half = CMat::zeros(2 * n, n);
    let mut col = 0;
    for (_, cols) in &pieces {
        if col + cols.ncols() > n {
            return Err(QrootError::Numerical("chain extraction produced too many columns".into()));
        }
        first_half.view_mut((0, col), (2 * n, cols.ncols())).copy_from(cols);
        col += cols.ncols();
    }
    if col != n {
        return Err(QrootError::Numerical(format!("chain extraction produced {col} of {n} columns")));
    }
    let spec = CanonicalSpec::new(pieces.into_iter().map(|(b, _)| b).collect());
    let s = OmegaMatrix::from_first_half(&first_half)?;
    finish(bm, hm, s, spec, tol)
}

fn residuals(bm: &CMat, hm: &CMat, s: &CMat, bc: &CMat, hc: &CMat) -> Result<(f64, f64)> {
    let s_inv = linalg::inverse(s)?;
    let sim = linalg::frobenius(&(&s_inv * bm * s - bc)) / linalg::frobenius(bm).max(1.0);
    let con = linalg::frobenius(&(s.adjoint() * hm * s - hc)) / linalg::frobenius(hc).max(1.0);
    Ok((sim, con))
}

fn finish(bm: &CMat, hm: &CMat, s: OmegaMatrix, spec: CanonicalSpec, tol: &Tolerances) -> Result<CanonicalPair> {
    let (bc, hc) = materialize_pair(&spec)?;
    let (bc, hc) = (bc.as_matrix(), hc.as_matrix());
    let mut s = s.into_matrix();
    let (mut res_sim, mut res_con) = residuals(bm, hm, &s, bc, hc)?;
    // S <- S (I + Hc (Hc - S*HS) / 2): the correction commutes with Bc when the
    // similarity is exact, so only the congruence error moves (quadratically).
    for _ in 0..3 {
        if res_con <= f64::EPSILON {
            break;
        }
        let e = hc - s.adjoint() * hm * &s;
        let refined = &s + &s * hc * e * c(0.5, 0.0);
        let (rs, rc) = residuals(bm, hm, &refined, bc, hc)?;
        if rs.max(rc) >= res_sim.max(res_con) {
            break;
        }
        (s, res_sim, res_con) = (refined, rs, rc);
    }
    if !(res_sim <= tol.residual && res_con <= tol.residual) {
        return Err(QrootError::Numerical(format!(
            "canonical similarity residuals {res_sim:.3e} / {res_con:.3e} exceed {:.1e}",
            tol.residual
        )));
    }
    let similarity = OmegaMatrix::from_complex_default(&s)?;
    Ok(CanonicalPair { similarity, spec, residual_similarity: res_sim, residual_congruence: res_con })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ClusterKind {
    Real,
    Upper,
    Lower,
}

#[derive(Clone, Debug)]
struct Cluster {
    values: Vec<Complex64>,
    centroid: Complex64,
    kind: ClusterKind,
}

/// Single-linkage clusters of the Schur diagonal at radius `delta`.
fn link_clusters(eigs: &[Complex64], delta: f64) -> Vec<Vec<usize>> {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let nx = p[j];
            p[j] = r;
            j = nx;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= delta {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_of[r] == usize::MAX {
            root_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_of[r]].push(i);
    }
    groups
}

/// Upper-triangular solve of `T11 X − X T22 = −T12`; returns `‖X‖_F`.
fn sylvester_coupling(t: &CMat, d: usize) -> f64 {
    let n = t.nrows();
    let e = n - d;
    if d == 0 || e == 0 {
        return 0.0;
    }
    let mut x = CMat::zeros(d, e);
    for j in 0..e {
        let mut rhs: CVec = -t.view((0, d + j), (d, 1)).column(0).into_owned();
        for l in 0..j {
            rhs += x.column(l) * t[(d + l, d + j)];
        }
        let shift = t[(d + j, d + j)];
        for i in (0..d).rev() {
            let mut acc = rhs[i];
            for k in i + 1..d {
                acc -= t[(i, k)] * x[(k, j)];
            }
            let piv = t[(i, i)] - shift;
            if piv.norm() == 0.0 {
                return f64::INFINITY;
            }
            x[(i, j)] = acc / piv;
        }
    }
    linalg::frobenius(&x)
}

/// Clusters the spectrum, growing the linkage radius by factors of 10 until
/// every cluster has a well-conditioned spectral projector and is nilpotent
/// after subtracting its centroid.
///
/// Linkage runs on eigenvalues folded into the closed upper half-plane, so a
/// cluster and its conjugate are always grouped the same way; a group that
/// stays off the real axis is then split into its upper and lower halves.
fn find_clusters(q: &CMat, t: &CMat, tol: &Tolerances, scale: f64) -> Result<Vec<Cluster>> {
    let n = t.nrows();
    let eigs: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let folded: Vec<Complex64> = eigs.iter().map(|z| c(z.re, z.im.abs())).collect();
    let rank_thr = tol.rank * scale;
    let mut delta = tol.cluster * scale;
    let mut last_reason = String::from("no admissible clustering");
    'ramp: while delta <= 0.5 * scale {
        let mut members: Vec<Vec<Complex64>> = Vec::new();
        for g in link_clusters(&folded, delta) {
            // touching the axis means the unfolded group links across it
            if g.iter().any(|&i| folded[i].im <= delta) {
                members.push(g.iter().map(|&i| eigs[i]).collect());
                continue;
            }
            let (upper, lower): (Vec<Complex64>, Vec<Complex64>) = g.iter().map(|&i| eigs[i]).partition(|z| z.im > 0.0);
            if upper.len() != lower.len() {
                last_reason = format!(
                    "{} eigenvalues above and {} below the real axis near {}",
                    upper.len(),
                    lower.len(),
                    folded[g[0]]
                );
                delta *= 10.0;
                continue 'ramp;
            }
            members.push(upper);
            members.push(lower);
        }

        let mut clusters = Vec::with_capacity(members.len());
        let mut ok = true;
        for values in members {
            let (mut qc, mut tc) = (q.clone(), t.clone());
            let d = linalg::reorder_schur(&mut qc, &mut tc, |z| values.contains(&z));
            let coupling = sylvester_coupling(&tc, d);
            if !(coupling <= tol.projector_max) {
                ok = false;
                last_reason = format!("spectral projector norm {coupling:.2e} at radius {delta:.2e}");
                break;
            }
            let t11 = tc.view((0, 0), (d, d)).into_owned();
            let centroid = t11.trace() / (d as f64);
            if d > 1 {
                let nil = linalg::mat_pow(&(t11 - CMat::identity(d, d) * centroid), d as u32);
                let s = linalg::singular_values(&nil)[0];
                if !(s <= rank_thr) {
                    ok = false;
                    last_reason = format!("cluster of size {d} at {centroid} is not nilpotent ({s:.2e})");
                    break;
                }
            }
            let kind = if centroid.im.abs() <= delta {
                ClusterKind::Real
            } else if centroid.im > 0.0 {
                ClusterKind::Upper
            } else {
                ClusterKind::Lower
            };
            let mut centroid = centroid;
            if kind == ClusterKind::Real {
                centroid.im = 0.0;
                if centroid.re.abs() <= delta {
                    centroid.re = 0.0;
                }
            }
            clusters.push(Cluster { values, centroid, kind });
        }
        if ok {
            if let Some(reason) = nested_clusters(&clusters) {
                last_reason = reason;
                delta *= 10.0;
                continue;
            }
            check_conjugate_symmetry(&clusters, delta)?;
            return Ok(clusters);
        }
        delta *= 10.0;
    }
    Err(QrootError::ClusterOverlap(last_reason))
}

/// A perturbed Jordan block spreads its eigenvalues on a ring around the true
/// value, and smaller blocks at the same value land near its centre. Linkage
/// can separate them, but their root subspaces are not H-orthogonal.
fn nested_clusters(clusters: &[Cluster]) -> Option<String> {
    let radius = |cl: &Cluster| cl.values.iter().map(|z| (z - cl.centroid).norm()).fold(0.0, f64::max);
    for (i, a) in clusters.iter().enumerate() {
        for b in &clusters[i + 1..] {
            let gap = (a.centroid - b.centroid).norm();
            if gap <= 2.0 * (radius(a) + radius(b)) {
                return Some(format!("clusters at {} and {} overlap", a.centroid, b.centroid));
            }
        }
    }
    None
}

fn check_conjugate_symmetry(clusters: &[Cluster], delta: f64) -> Result<()> {
    for cl in clusters.iter().filter(|c| c.kind == ClusterKind::Upper) {
        let mirror = clusters.iter().find(|o| {
            o.kind == ClusterKind::Lower
                && o.values.len() == cl.values.len()
                && (o.centroid - cl.centroid.conj()).norm() <= delta.max(1e-8 * cl.centroid.norm())
        });
        if mirror.is_none() {
            return Err(QrootError::ClusterOverlap(format!("no conjugate partner for cluster at {}", cl.centroid)));
        }
    }
    for cl in clusters.iter().filter(|c| c.kind == ClusterKind::Real) {
        if cl.values.len() % 2 == 1 {
            return Err(QrootError::ClusterOverlap(format!("real cluster at {} has odd size", cl.centroid.re)));
        }
    }
    Ok(())
}

/// Nilpotency index of `nz` at threshold `thr`.
fn nilpotency_index(nz: &CMat, thr: f64) -> Result<usize> {
    let d = nz.nrows();
    let mut p = CMat::identity(d, d);
    for k in 1..=d {
        p = &p * nz;
        let s = linalg::singular_values(&p);
        for &sigma in &s {
            if sigma > thr / 10.0 && sigma < thr * 10.0 {
                return Err(QrootError::RankAmbiguous { sigma, threshold: thr });
            }
        }
        if s[0] <= thr {
            return Ok(k);
        }
    }
    Err(QrootError::Numerical("root subspace is not nilpotent after shift".into()))
}

fn apply_poly(n: &CMat, coeffs: &[Complex64], v: &CVec) -> CVec {
    let mut acc = v * coeffs[0];
    let mut pw = v.clone();
    for &cq in &coeffs[1..] {
        pw = n * pw;
        acc += &pw * cq;
    }
    acc
}

/// Columns `N^{k−1} w, …, N w, w`.
fn chain(n: &CMat, w: &CVec, k: usize) -> CMat {
    let mut cols = vec![w.clone()];
    for _ in 1..k {
        let next = n * cols.last().expect("non-empty");
        cols.push(next);
    }
    cols.reverse();
    CMat::from_columns(&cols)
}

/// Solves `Σ_t g_t f(s + t) = target · δ_{s,k−1}` for `s = k−1, …, 0`.
pub(crate) fn hankel_coefficients(f: &[Complex64], target: Complex64) -> Result<Vec<Complex64>> {
    let k = f.len();
    let lead = f[k - 1];
    if lead.norm() == 0.0 {
        return Err(QrootError::DegenerateCoefficient("leading Gram coefficient vanishes".into()));
    }
    let mut g = vec![target / lead];
    for qd in 1..k {
        let mut acc = linalg::ZERO;
        for (t, gt) in g.iter().enumerate() {
            acc += gt * f[k - 1 - qd + t];
        }
        g.push(-acc / lead);
    }
    Ok(g)
}

/// Power-series square root `p` with `p² = g` (truncated), principal branch for `p_0`.
pub(crate) fn series_sqrt(g: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![g[0].sqrt()];
    for qd in 1..g.len() {
        let mut acc = g[qd];
        for t in 1..qd {
            acc -= p[t] * p[qd - t];
        }
        p.push(acc / (p[0] * 2.0));
    }
    p
}

fn deflate(basis: &CMat, constraints: &CMat, remove: usize) -> CMat {
    let d = basis.ncols();
    let null = linalg::nullspace(constraints, d - remove);
    linalg::orthonormalize(&(basis * null))
}

fn real_chains(bm: &CMat, hm: &CMat, lambda: f64, mut basis: CMat, thr: f64) -> Result<Vec<(CanonicalBlock, CMat)>> {
    let dim = bm.nrows();
    let nmat = bm - CMat::identity(dim, dim) * c(lambda, 0.0);
    let mut out = Vec::new();
    while basis.ncols() > 0 {
        let nz = basis.adjoint() * &nmat * &basis;
        let k = nilpotency_index(&nz, thr)?;
        if 2 * k > basis.ncols() {
            return Err(QrootError::Numerical(format!(
                "real root subspace of dimension {} cannot hold a doubled block of size {k}",
                basis.ncols()
            )));
        }
        let nk1 = linalg::mat_pow(&nmat, (k - 1) as u32);
        let gram = basis.adjoint() * hm * &nk1 * &basis;
        let (vals, vecs) = linalg::hermitian_eigen(&gram);
        let best = (0..vals.len()).max_by(|&a, &b| vals[a].abs().total_cmp(&vals[b].abs())).expect("non-empty");
        let v: CVec = &basis * vecs.column(best);
        let hv = hm * &v;
        let mut f = Vec::with_capacity(k);
        let mut pw = v.clone();
        for s in 0..k {
            if s > 0 {
                pw = &nmat * pw;
            }
            f.push(c(pw.dotc(&hv).re, 0.0));
        }
        let sign = Sign::from_f64(f[k - 1].re);
        let g = hankel_coefficients(&f, c(sign.as_f64(), 0.0))?;
        let p = series_sqrt(&g);
        let w = apply_poly(&nmat, &p, &v);
        let cols = chain(&nmat, &w, k);
        let both = concat_columns(&cols, &tau_columns(&cols));
        let constraints = both.adjoint() * hm * &basis;
        basis = deflate(&basis, &constraints, 2 * k);
        out.push((CanonicalBlock::real(lambda, k, sign), cols));
    }
    Ok(out)
}

fn nonreal_chains(
    bm: &CMat,
    hm: &CMat,
    lambda: Complex64,
    mut basis: CMat,
    thr: f64,
) -> Result<Vec<(CanonicalBlock, CMat)>> {
    let dim = bm.nrows();
    let nmat = bm - CMat::identity(dim, dim) * lambda;
    let mut out = Vec::new();
    while basis.ncols() > 0 {
        let nz = basis.adjoint() * &nmat * &basis;
        let k = nilpotency_index(&nz, thr)?;
        if 2 * k > basis.ncols() {
            return Err(QrootError::Numerical(format!(
                "root subspace of dimension {} cannot hold a chain pair of size {k}",
                basis.ncols()
            )));
        }
        let nk1 = linalg::mat_pow(&nmat, (k - 1) as u32);
        // M_ij = β(N^{k−1} z_i, z_j)
        let m = tau_columns(&(&nk1 * &basis)).adjoint() * hm * &basis;
        let (u, _, vv) = linalg::svd_full(&m);
        let alpha: CVec = u.column(0).map(|z| z.conj());
        let gamma: CVec = vv.column(0).into_owned();
        let a = &basis * alpha;
        let bvec = &basis * gamma;
        let ta_h = (tau_columns(&CMat::from_columns(std::slice::from_ref(&a))).adjoint() * hm).row(0).into_owned();
        let mut h = Vec::with_capacity(k);
        let mut pw = bvec.clone();
        for s in 0..k {
            if s > 0 {
                pw = &nmat * pw;
            }
            h.push((&ta_h * &pw)[(0, 0)]);
        }
        let p = hankel_coefficients(&h, linalg::ONE)?;
        let bnorm = apply_poly(&nmat, &p, &bvec);
        let ucols = chain(&nmat, &a, k);
        let wcols = chain(&nmat, &bnorm, k);
        let constraints = tau_columns(&concat_columns(&ucols, &wcols)).adjoint() * hm * &basis;
        basis = deflate(&basis, &constraints, 2 * k);
        let first_copy = concat_columns(&ucols, &(-tau_columns(&wcols)));
        out.push((CanonicalBlock::nonreal(lambda, k), first_copy));
    }
    Ok(out)
}

fn concat_columns(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// Recognizes an input that is exactly a materialized canonical pair (in any
/// block order) and returns the sorting permutation as the similarity.
/// Eigenvalues within `delta` of the real axis but off it are left to clustering.
fn recognize_canonical(bm: &CMat, hm: &CMat, delta: f64) -> Option<CanonicalPair> {
    let n = bm.nrows() / 2;
    let zero_block = |m: &CMat, r: usize, c0: usize| m.view((r, c0), (n, n)).iter().all(|z| *z == linalg::ZERO);
    if !zero_block(bm, 0, n) || !zero_block(bm, n, 0) || !zero_block(hm, 0, n) || !zero_block(hm, n, 0) {
        return None;
    }
    let j1 = bm.view((0, 0), (n, n)).into_owned();
    let h1 = hm.view((0, 0), (n, n)).into_owned();
    if bm.view((n, n), (n, n)) != j1.map(|z| z.conj()) || hm.view((n, n), (n, n)) != h1 {
        return None;
    }
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        let nz: Vec<usize> = (0..n).filter(|&j| h1[(i, j)] != linalg::ZERO).collect();
        if nz.len() != 1 || nz[0] < i {
            return None;
        }
        let width = nz[0] - i + 1;
        let lambda = j1[(i, i)];
        let block = if lambda.im == 0.0 {
            let s = h1[(i, nz[0])];
            if s.im != 0.0 || s.re.abs() != 1.0 {
                return None;
            }
            CanonicalBlock::real(lambda.re, width, Sign::from_f64(s.re))
        } else if lambda.im > delta && width.is_multiple_of(2) {
            CanonicalBlock::nonreal(lambda, width / 2)
        } else {
            return None;
        };
        blocks.push(block);
        i += width;
    }
    let spec = CanonicalSpec::new(blocks);
    let (jc, qc) = spec.per_copy_pair();
    if jc != j1 || qc != h1 {
        return None;
    }
    // stable sort of the blocks into canonical order, carried by a permutation
    let offsets = spec.offsets();
    let mut order: Vec<usize> = (0..spec.blocks.len()).collect();
    order.sort_by(|&a, &b| canonical_order(&spec.blocks[a], &spec.blocks[b]));
    let mut perm = CMat::zeros(n, n);
    let mut col = 0;
    for &bi in &order {
        for r in 0..spec.blocks[bi].width() {
            perm[(offsets[bi] + r, col)] = linalg::ONE;
            col += 1;
        }
    }
    let sorted = CanonicalSpec::new(order.iter().map(|&bi| spec.blocks[bi]).collect());
    Some(CanonicalPair {
        similarity: OmegaMatrix::from_complex_copy(&perm),
        spec: sorted,
        residual_similarity: 0.0,
        residual_congruence: 0.0,
    })
}

/// Counts of positive and negative eigenvalues of a Hermitian matrix.
///
/// Fails with `NearSingular` when an eigenvalue lies within `tau_rank` of zero.
pub fn inertia(h: &CMat, tau_rank: f64) -> Result<(usize, usize)> {
    if h.nrows() != h.ncols() {
        return Err(QrootError::DimensionMismatch("inertia needs a square matrix".into()));
    }
    let herm = linalg::frobenius(&(h - h.adjoint()));
    if herm > omega::HERMITIAN_TOL_FACTOR * linalg::frobenius(h).max(1.0) {
        return Err(QrootError::NotHermitian(herm));
    }
    let (vals, _) = linalg::hermitian_eigen(h);
    if vals.iter().any(|v| v.abs() <= tau_rank) {
        return Err(QrootError::NearSingular(tau_rank));
    }
    Ok((vals.iter().filter(|&&v| v > 0.0).count(), vals.iter().filter(|&&v| v < 0.0).count()))
}
