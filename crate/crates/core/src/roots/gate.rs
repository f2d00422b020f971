use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::canonical::{CanonicalBlock, CanonicalSpec, SegreSequence, Sign};
use crate::error::{QrootError, Result};

/// `r` blocks of size `a + 1` and `m − r` blocks of size `a` at eigenvalue zero,
/// the Jordan structure of `J_t(0)^m` with `t = a·m + r`.
///
/// `epsilons` lists the signs of the present blocks, larger size first. Blocks
/// of size zero are absent, so for `a = 0` only `r` signs are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MTuple {
    pub a: usize,
    pub r: usize,
    pub eta: Sign,
    pub epsilons: Vec<Sign>,
}

impl MTuple {
    /// Size of the root block: `a·m + r`.
    pub fn t(&self, m: usize) -> usize {
        self.a * m + self.r
    }

    /// Tuple whose signs follow the sign rule for `eta`, with the `eta` signs first in each group.
    pub fn with_rule(a: usize, r: usize, eta: Sign, m: usize) -> MTuple {
        let mut epsilons = group_signs(r, eta);
        if a > 0 {
            epsilons.extend(group_signs(m - r, eta));
        }
        MTuple { a, r, eta, epsilons }
    }

    /// `(size, sign)` of every present block.
    pub fn blocks(&self) -> Vec<(usize, Sign)> {
        self.epsilons.iter().enumerate().map(|(i, &s)| (if i < self.r { self.a + 1 } else { self.a }, s)).collect()
    }
}

fn group_signs(count: usize, eta: Sign) -> Vec<Sign> {
    let plus = count.div_ceil(2);
    let mut v = vec![eta; plus];
    v.extend(std::iter::repeat_n(eta.flip(), count - plus));
    v
}

/// Checks one group of signs against the rule for `eta`.
fn group_ok(signs: &[Sign], eta: Sign) -> bool {
    let with = signs.iter().filter(|&&s| s == eta).count();
    with == signs.len().div_ceil(2)
}

/// For each tuple, the `η` that satisfies the sign rule in both size groups, if any.
///
/// The overall flag is true when every tuple has one.
pub fn sign_pattern_check(tuples: &[MTuple], m: usize) -> (bool, Vec<Option<Sign>>) {
    let per: Vec<Option<Sign>> = tuples
        .iter()
        .map(|tu| {
            let split = tu.r.min(tu.epsilons.len());
            let (first, second) = tu.epsilons.split_at(split);
            let second_len = if tu.a > 0 { m.saturating_sub(tu.r) } else { 0 };
            if first.len() != tu.r || second.len() != second_len {
                return None;
            }
            [Sign::Plus, Sign::Minus].into_iter().find(|&eta| group_ok(first, eta) && group_ok(second, eta))
        })
        .collect();
    (per.iter().all(Option::is_some), per)
}

/// Groups one copy of the zero-eigenvalue Segre characteristic into m-tuples.
///
/// Returns `(a, r)` per tuple. The largest remaining part always opens a tuple
/// with `a + 1` equal to it; the number `r` of such parts is tried from `m`
/// downwards with backtracking.
pub fn m_tuple_partition(segre: &SegreSequence, m: usize) -> Result<Vec<(usize, usize)>> {
    if m == 0 {
        return Err(QrootError::NotPartitionable("m must be positive".into()));
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in &segre.parts {
        *counts.entry(p).or_default() += 1;
    }
    let mut out = Vec::new();
    if partition_sizes(&mut counts, m, &mut out) {
        Ok(out)
    } else {
        Err(QrootError::NotPartitionable(format!("parts {:?} with m = {m}", segre.parts)))
    }
}

fn take(counts: &mut BTreeMap<usize, usize>, key: usize, n: usize) -> bool {
    if n == 0 {
        return true;
    }
    match counts.get_mut(&key) {
        Some(c) if *c >= n => {
            *c -= n;
            if *c == 0 {
                counts.remove(&key);
            }
            true
        }
        _ => false,
    }
}

fn give(counts: &mut BTreeMap<usize, usize>, key: usize, n: usize) {
    if n > 0 {
        *counts.entry(key).or_default() += n;
    }
}

fn partition_sizes(counts: &mut BTreeMap<usize, usize>, m: usize, out: &mut Vec<(usize, usize)>) -> bool {
    let Some((&s, &avail)) = counts.iter().next_back() else {
        return true;
    };
    let a = s - 1;
    for r in (1..=m.min(avail)).rev() {
        let rest = if a > 0 { m - r } else { 0 };
        take(counts, s, r);
        if take(counts, a, rest) {
            out.push((a, r));
            if partition_sizes(counts, m, out) {
                return true;
            }
            out.pop();
            give(counts, a, rest);
        }
        give(counts, s, r);
    }
    false
}

type SignedCounts = BTreeMap<(usize, i64), usize>;

fn partition_signed(counts: &mut SignedCounts, m: usize, out: &mut Vec<MTuple>) -> bool {
    let Some(s) = counts.keys().map(|k| k.0).max() else {
        return true;
    };
    let avail: usize = counts.iter().filter(|(k, _)| k.0 == s).map(|(_, v)| v).sum();
    let a = s - 1;
    for r in (1..=m.min(avail)).rev() {
        for eta in [Sign::Plus, Sign::Minus] {
            let tuple = MTuple::with_rule(a, r, eta, m);
            let need = tuple.blocks();
            let mut taken = Vec::new();
            let mut ok = true;
            for &(size, sign) in &need {
                let key = (size, sign.as_i64());
                match counts.get_mut(&key) {
                    Some(c) if *c > 0 => {
                        *c -= 1;
                        taken.push(key);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                counts.retain(|_, v| *v > 0);
                out.push(tuple);
                if partition_signed(counts, m, out) {
                    return true;
                }
                out.pop();
            }
            for key in taken {
                *counts.entry(key).or_default() += 1;
            }
        }
    }
    false
}

/// Kind of obstruction found by [`root_exists`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    NegativeSignPairing,
    SegreTupleMismatch,
    SignPatternViolation,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertificateKind::NegativeSignPairing => "NegativeSignPairing",
            CertificateKind::SegreTupleMismatch => "SegreTupleMismatch",
            CertificateKind::SignPatternViolation => "SignPatternViolation",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub lambda: Complex64,
    pub detail: String,
}

/// Outcome of the existence gate. `certificate` is set exactly when `exists` is false.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDecision {
    pub exists: bool,
    pub certificate: Option<Certificate>,
    /// Zero-eigenvalue tuples used for construction (empty when refused).
    pub tuples: Vec<MTuple>,
}

impl RootDecision {
    fn refuse(kind: CertificateKind, lambda: Complex64, detail: String) -> RootDecision {
        RootDecision { exists: false, certificate: Some(Certificate { kind, lambda, detail }), tuples: Vec::new() }
    }
}

pub(crate) fn same_lambda(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * a.norm().max(1.0)
}

/// Decides whether the canonical pair described by `spec` has an H-selfadjoint m-th root.
pub fn root_exists(spec: &CanonicalSpec, m: usize) -> Result<RootDecision> {
    if m == 0 {
        return Err(QrootError::SpecInvalid("m must be at least 1".into()));
    }
    spec.validate()?;

    if m.is_multiple_of(2) {
        let mut seen: Vec<(Complex64, usize)> = Vec::new();
        for b in spec.blocks.iter().filter(|b| b.is_real() && b.lambda.re < 0.0) {
            if seen.iter().any(|&(l, k)| k == b.size && same_lambda(l, b.lambda)) {
                continue;
            }
            seen.push((b.lambda, b.size));
            let group =
                spec.blocks.iter().filter(|o| o.is_real() && o.size == b.size && same_lambda(o.lambda, b.lambda));
            let (mut plus, mut minus) = (0, 0);
            for o in group {
                match o.sign {
                    Some(Sign::Plus) => plus += 1,
                    _ => minus += 1,
                }
            }
            if plus != minus {
                return Ok(RootDecision::refuse(
                    CertificateKind::NegativeSignPairing,
                    b.lambda,
                    format!("size {} blocks carry {plus} positive and {minus} negative signs", b.size),
                ));
            }
        }
    }

    let zero: Vec<&CanonicalBlock> = spec.blocks.iter().filter(|b| b.is_real() && b.lambda.re == 0.0).collect();
    if zero.is_empty() {
        return Ok(RootDecision { exists: true, certificate: None, tuples: Vec::new() });
    }
    let mut counts = SignedCounts::new();
    for b in &zero {
        *counts.entry((b.size, b.sign.map_or(0, Sign::as_i64))).or_default() += 1;
    }
    let mut tuples = Vec::new();
    if partition_signed(&mut counts, m, &mut tuples) {
        return Ok(RootDecision { exists: true, certificate: None, tuples });
    }
    let segre = SegreSequence::new(Complex64::new(0.0, 0.0), zero.iter().map(|b| b.size).collect());
    let desc: Vec<String> =
        zero.iter().map(|b| format!("({},{})", b.size, b.sign.map_or("?".into(), |s| s.to_string()))).collect();
    let detail = desc.join(" ");
    match m_tuple_partition(&segre, m) {
        Err(_) => Ok(RootDecision::refuse(
            CertificateKind::SegreTupleMismatch,
            Complex64::new(0.0, 0.0),
            format!("zero blocks {detail} cannot be grouped into {m}-tuples"),
        )),
        Ok(_) => Ok(RootDecision::refuse(
            CertificateKind::SignPatternViolation,
            Complex64::new(0.0, 0.0),
            format!("no grouping of zero blocks {detail} into {m}-tuples satisfies the sign rule"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use Sign::{Minus, Plus};

    fn spec(blocks: Vec<CanonicalBlock>) -> CanonicalSpec {
        CanonicalSpec::new(blocks).sorted()
    }

    #[test]
    fn gate_examples() {
        let d = root_exists(&spec(vec![CanonicalBlock::real(4.0, 2, Plus)]), 2).unwrap();
        assert!(d.exists && d.certificate.is_none());

        let neg = spec(vec![CanonicalBlock::real(-1.0, 1, Plus), CanonicalBlock::real(-1.0, 1, Plus)]);
        let d = root_exists(&neg, 2).unwrap();
        assert_eq!(d.certificate.unwrap().kind, CertificateKind::NegativeSignPairing);
        assert!(root_exists(&neg, 3).unwrap().exists);

        let z = spec(vec![CanonicalBlock::real(0.0, 2, Plus), CanonicalBlock::real(0.0, 1, Minus)]);
        let d = root_exists(&z, 2).unwrap();
        assert!(!d.exists);
        assert_eq!(d.certificate.unwrap().kind, CertificateKind::SignPatternViolation);
        let z_ok = spec(vec![CanonicalBlock::real(0.0, 2, Plus), CanonicalBlock::real(0.0, 1, Plus)]);
        assert!(root_exists(&z_ok, 2).unwrap().exists);

        let mismatch = spec(vec![CanonicalBlock::real(0.0, 3, Plus), CanonicalBlock::real(0.0, 1, Plus)]);
        assert_eq!(root_exists(&mismatch, 2).unwrap().certificate.unwrap().kind, CertificateKind::SegreTupleMismatch);
    }

    #[test]
    fn nonreal_and_positive_always_admit() {
        let s = spec(vec![CanonicalBlock::nonreal(c(1., 1.), 3), CanonicalBlock::real(2.0, 2, Minus)]);
        for m in 1..=6 {
            assert!(root_exists(&s, m).unwrap().exists);
        }
    }

    #[test]
    fn partition_examples() {
        let z = c(0., 0.);
        assert_eq!(m_tuple_partition(&SegreSequence::new(z, vec![3, 3, 2, 2]), 4).unwrap(), vec![(2, 2)]);
        assert_eq!(m_tuple_partition(&SegreSequence::new(z, vec![2, 1]), 2).unwrap(), vec![(1, 1)]);
        assert!(matches!(
            m_tuple_partition(&SegreSequence::new(z, vec![3, 1]), 2),
            Err(QrootError::NotPartitionable(_))
        ));
        // two size-1 blocks can form one tuple with r = 2 or two with r = 1
        assert_eq!(m_tuple_partition(&SegreSequence::new(z, vec![1, 1]), 2).unwrap(), vec![(0, 2)]);
    }

    #[test]
    fn sign_rule_examples() {
        let t = |a, r, eps: Vec<Sign>| MTuple { a, r, eta: Plus, epsilons: eps };
        assert_eq!(sign_pattern_check(&[t(0, 2, vec![Plus, Minus])], 2), (true, vec![Some(Plus)]));
        assert!(!sign_pattern_check(&[t(0, 2, vec![Plus, Plus])], 2).0);
        assert_eq!(sign_pattern_check(&[t(1, 1, vec![Plus, Plus])], 2), (true, vec![Some(Plus)]));
        assert!(!sign_pattern_check(&[t(1, 1, vec![Plus, Minus])], 2).0);
        assert_eq!(sign_pattern_check(&[t(1, 1, vec![Minus, Minus])], 2).1, vec![Some(Minus)]);
    }

    #[test]
    fn rule_tuples_pass_their_own_check() {
        for m in 1..=5 {
            for r in 1..=m {
                for a in 0..3 {
                    for eta in [Plus, Minus] {
                        let tu = MTuple::with_rule(a, r, eta, m);
                        assert!(sign_pattern_check(std::slice::from_ref(&tu), m).0);
                        assert_eq!(tu.blocks().iter().map(|b| b.0).sum::<usize>(), tu.t(m));
                    }
                }
            }
        }
    }
}
