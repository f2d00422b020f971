//! Canonical pairs of H-selfadjoint matrices.
//!
//! A canonical pair is described by one copy of its block list. Real eigenvalues
//! carry a sign and materialize as `J_k(λ)` against `η Q_k`; eigenvalues in the
//! open upper half-plane materialize as `J_k(λ) ⊕ J_k(conj λ)` against `Q_{2k}`.
//! At the Ω level the copy always appears twice, the second time conjugated, so a
//! materialized pair is `(ω(J), ω(Q))` for the complex per-copy pair `(J, Q)`.

pub(crate) mod canonicalize;
mod permutation;
mod segre;

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use crate::error::{QrootError, Result};
use crate::linalg::{self, c, CMat};
use crate::omega::OmegaMatrix;

pub use canonicalize::{canonicalize_pair, inertia, CanonicalPair, Tolerances};
pub use permutation::{interleave_permutation, interleave_permutation_real};
pub use segre::{segre_characteristic, segre_characteristic_default, SegreSequence};

/// Sign attached to a Jordan block at a real eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn from_f64(v: f64) -> Sign {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.as_i64() as f64
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One block of a canonical pair (one copy).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalBlock {
    pub lambda: Complex64,
    pub size: usize,
    /// Present exactly when `lambda` is real.
    pub sign: Option<Sign>,
}

impl CanonicalBlock {
    pub fn real(lambda: f64, size: usize, sign: Sign) -> Self {
        CanonicalBlock { lambda: c(lambda, 0.0), size, sign: Some(sign) }
    }

    pub fn nonreal(lambda: Complex64, size: usize) -> Self {
        CanonicalBlock { lambda, size, sign: None }
    }

    pub fn is_real(&self) -> bool {
        self.lambda.im == 0.0
    }

    /// Number of per-copy rows the block occupies.
    pub fn width(&self) -> usize {
        if self.is_real() {
            self.size
        } else {
            2 * self.size
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(QrootError::SpecInvalid("block size must be positive".into()));
        }
        if !(self.lambda.re.is_finite() && self.lambda.im.is_finite()) {
            return Err(QrootError::SpecInvalid("eigenvalue must be finite".into()));
        }
        if self.lambda.im < 0.0 {
            return Err(QrootError::SpecInvalid(format!(
                "nonreal eigenvalue {} must lie in the upper half-plane",
                self.lambda
            )));
        }
        match (self.is_real(), self.sign) {
            (true, None) => Err(QrootError::SpecInvalid(format!("real block at {} needs a sign", self.lambda.re))),
            (false, Some(_)) => {
                Err(QrootError::SpecInvalid(format!("nonreal block at {} must not carry a sign", self.lambda)))
            }
            _ => Ok(()),
        }
    }

    /// Per-copy `(J, Q)` pair of this block.
    pub fn per_copy_pair(&self) -> (CMat, CMat) {
        let k = self.size;
        match self.sign {
            Some(s) => (jordan_block(self.lambda, k), sip_matrix(k).scale(s.as_f64())),
            None => (
                linalg::direct_sum(&[jordan_block(self.lambda, k), jordan_block(self.lambda.conj(), k)]),
                sip_matrix(2 * k),
            ),
        }
    }

    fn sign_key(&self) -> i64 {
        self.sign.map_or(0, Sign::as_i64)
    }
}

/// Canonical ordering: `Re λ` ascending, `Im λ` ascending, size descending, sign descending.
pub fn canonical_order(a: &CanonicalBlock, b: &CanonicalBlock) -> Ordering {
    a.lambda
        .re
        .total_cmp(&b.lambda.re)
        .then(a.lambda.im.total_cmp(&b.lambda.im))
        .then(b.size.cmp(&a.size))
        .then(b.sign_key().cmp(&a.sign_key()))
}

/// One copy of a canonical block list; the Ω-level pair is this copy doubled.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalSpec {
    pub blocks: Vec<CanonicalBlock>,
    pub doubled: bool,
}

impl CanonicalSpec {
    pub fn new(blocks: Vec<CanonicalBlock>) -> Self {
        CanonicalSpec { blocks, doubled: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(QrootError::SpecInvalid("spec has no blocks".into()));
        }
        if !self.doubled {
            return Err(QrootError::SpecInvalid("Omega-level specs are always doubled".into()));
        }
        self.blocks.iter().try_for_each(CanonicalBlock::validate)
    }

    /// Per-copy dimension `n`; the Ω-level pair is `2n × 2n`.
    pub fn half_dim(&self) -> usize {
        self.blocks.iter().map(CanonicalBlock::width).sum()
    }

    /// Per-copy row offset of each block.
    pub fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                let o = *acc;
                *acc += b.width();
                Some(o)
            })
            .collect()
    }

    pub fn sorted(&self) -> CanonicalSpec {
        let mut blocks = self.blocks.clone();
        blocks.sort_by(canonical_order);
        CanonicalSpec { blocks, doubled: self.doubled }
    }

    pub fn is_sorted(&self) -> bool {
        self.blocks.windows(2).all(|w| canonical_order(&w[0], &w[1]) != Ordering::Greater)
    }

    /// Equality as multisets of blocks, with eigenvalues compared to within
    /// `lambda_tol · max(1, |λ|)`; sizes and signs must agree exactly. Sorting
    /// first would be fragile, since nearby real parts can swap order.
    pub fn matches(&self, other: &CanonicalSpec, lambda_tol: f64) -> bool {
        if self.blocks.len() != other.blocks.len() || self.doubled != other.doubled {
            return false;
        }
        let mut used = vec![false; other.blocks.len()];
        self.blocks.iter().all(|x| {
            let hit = other.blocks.iter().enumerate().position(|(j, y)| {
                !used[j]
                    && x.size == y.size
                    && x.sign == y.sign
                    && (x.lambda - y.lambda).norm() <= lambda_tol * x.lambda.norm().max(1.0)
            });
            hit.map(|j| used[j] = true).is_some()
        })
    }

    /// The complex per-copy pair `(J, Q)`.
    pub fn per_copy_pair(&self) -> (CMat, CMat) {
        let (js, qs): (Vec<CMat>, Vec<CMat>) = self.blocks.iter().map(CanonicalBlock::per_copy_pair).unzip();
        (linalg::direct_sum(&js), linalg::direct_sum(&qs))
    }
}

/// `J_k(λ)`: `λ` on the diagonal and ones on the superdiagonal.
pub fn jordan_block(lambda: Complex64, k: usize) -> CMat {
    CMat::from_fn(k, k, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            linalg::ONE
        } else {
            linalg::ZERO
        }
    })
}

/// The `k × k` standard involutory permutation (ones on the anti-diagonal).
pub fn sip_matrix(k: usize) -> CMat {
    linalg::real_matrix(k, k, |i, j| if i + j + 1 == k { 1.0 } else { 0.0 })
}

/// The Ω-level canonical pair `(ω(J), ω(Q))` described by `spec`.
pub fn materialize_pair(spec: &CanonicalSpec) -> Result<(OmegaMatrix, OmegaMatrix)> {
    spec.validate()?;
    let (j, q) = spec.per_copy_pair();
    Ok((OmegaMatrix::from_complex_copy(&j), OmegaMatrix::from_complex_copy(&q)))
}
