use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::canonical::{materialize_pair, CanonicalBlock, CanonicalSpec, Sign};
use crate::error::{QrootError, Result};
use crate::linalg::{c, CMat, CVec};
use crate::omega::{self, tau, OmegaMatrix};
use crate::quat_matrix::QuatMatrix;
use crate::roots::{root_exists, MTuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenClass {
    Positive,
    Nonreal,
    Negative,
    Zero,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Force {
    Admit,
    Refuse,
    #[default]
    Any,
}

/// What [`random_instance`] may draw.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    pub classes: Vec<EigenClass>,
    /// Bound on the per-copy dimension.
    pub max_size: usize,
    pub m: usize,
    #[serde(default)]
    pub force: Force,
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        if self.classes.is_empty() {
            return Err(QrootError::ProfileInvalid("no eigenvalue classes".into()));
        }
        if self.max_size == 0 || self.max_size > 16 {
            return Err(QrootError::ProfileInvalid(format!("max_size {} outside 1..=16", self.max_size)));
        }
        if self.m == 0 {
            return Err(QrootError::ProfileInvalid("m must be at least 1".into()));
        }
        if self.force == Force::Refuse && self.refusal_units().is_empty() {
            return Err(QrootError::ProfileInvalid(
                "refusal needs negative eigenvalues with even m, or zero eigenvalues with m >= 2".into(),
            ));
        }
        if self.force == Force::Admit
            && self.classes.iter().all(|&c| c == EigenClass::Zero)
            && self.max_size < self.m.min(2)
        {
            return Err(QrootError::ProfileInvalid("max_size too small for an admissible zero block".into()));
        }
        Ok(())
    }

    fn refusal_units(&self) -> Vec<EigenClass> {
        let mut v = Vec::new();
        if self.m.is_multiple_of(2) && self.classes.contains(&EigenClass::Negative) {
            v.push(EigenClass::Negative);
        }
        if self.m >= 2 && self.max_size >= 4 && self.classes.contains(&EigenClass::Zero) {
            v.push(EigenClass::Zero);
        }
        v
    }
}

/// A seeded test pair together with its canonical spec.
#[derive(Clone, Debug)]
pub struct Instance {
    pub b: QuatMatrix,
    pub h: QuatMatrix,
    pub spec: CanonicalSpec,
}

const POSITIVE: [f64; 3] = [1.0, 2.5, 4.0];
const NEGATIVE: [f64; 3] = [-1.0, -2.5, -4.0];
const NONREAL: [(f64, f64); 3] = [(1.0, 1.0), (-1.0, 2.0), (0.5, 3.0)];

fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.random_range(0..xs.len())]
}

fn random_sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.random_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Blocks of one class using at most `room` per-copy dimensions, or `None`.
fn draw_unit(
    rng: &mut ChaCha8Rng,
    class: EigenClass,
    room: usize,
    m: usize,
    admit: bool,
) -> Option<Vec<CanonicalBlock>> {
    let size = |rng: &mut ChaCha8Rng, cap: usize| rng.random_range(1..=cap.min(3));
    match class {
        EigenClass::Positive => {
            let k = size(rng, room);
            Some(vec![CanonicalBlock::real(pick(rng, &POSITIVE), k, random_sign(rng))])
        }
        EigenClass::Nonreal => {
            if room < 2 {
                return None;
            }
            let (re, im) = pick(rng, &NONREAL);
            Some(vec![CanonicalBlock::nonreal(c(re, im), size(rng, room / 2))])
        }
        EigenClass::Negative => {
            let lambda = pick(rng, &NEGATIVE);
            if m.is_multiple_of(2) && admit {
                if room < 2 {
                    return None;
                }
                let k = size(rng, room / 2);
                Some(vec![CanonicalBlock::real(lambda, k, Sign::Plus), CanonicalBlock::real(lambda, k, Sign::Minus)])
            } else {
                Some(vec![CanonicalBlock::real(lambda, size(rng, room), random_sign(rng))])
            }
        }
        EigenClass::Zero => {
            if admit {
                let a_max = if room >= m { 1 } else { 0 };
                let a = rng.random_range(0..=a_max);
                let r_max = if a == 0 { room.min(m) } else { (room - m).min(m) };
                if r_max == 0 {
                    return None;
                }
                let r = rng.random_range(1..=r_max);
                let tuple = MTuple::with_rule(a, r, random_sign(rng), m);
                Some(tuple.blocks().into_iter().map(|(k, s)| CanonicalBlock::real(0.0, k, s)).collect())
            } else {
                Some(vec![CanonicalBlock::real(0.0, size(rng, room), random_sign(rng))])
            }
        }
    }
}

fn refusal_unit(rng: &mut ChaCha8Rng, class: EigenClass, cap: usize) -> Vec<CanonicalBlock> {
    match class {
        EigenClass::Negative => {
            vec![CanonicalBlock::real(pick(rng, &NEGATIVE), rng.random_range(1..=cap.min(2)), random_sign(rng))]
        }
        // a size-3 block needs partners of size 2 that never appear
        _ => vec![CanonicalBlock::real(0.0, 3, random_sign(rng)), CanonicalBlock::real(0.0, 1, random_sign(rng))],
    }
}

fn draw_spec(rng: &mut ChaCha8Rng, profile: &Profile) -> CanonicalSpec {
    let admit = profile.force != Force::Any;
    let mut blocks = Vec::new();
    let mut room = profile.max_size;
    if profile.force == Force::Refuse {
        let units = profile.refusal_units();
        let class = pick(rng, &units);
        let unit = refusal_unit(rng, class, profile.max_size);
        room -= unit.iter().map(CanonicalBlock::width).sum::<usize>();
        blocks.extend(unit);
    }
    // refusal instances get no further zero blocks so the obstruction survives
    let classes: Vec<EigenClass> = profile
        .classes
        .iter()
        .copied()
        .filter(|&c| !(profile.force == Force::Refuse && c == EigenClass::Zero))
        .collect();
    let target = rng.random_range(1..=profile.max_size);
    let mut attempts = 0;
    while room > 0 && profile.max_size - room < target && attempts < 32 && !classes.is_empty() {
        attempts += 1;
        let class = pick(rng, &classes);
        if let Some(unit) = draw_unit(rng, class, room, profile.m, admit) {
            let w: usize = unit.iter().map(CanonicalBlock::width).sum();
            if w <= room {
                room -= w;
                blocks.extend(unit);
            }
        }
    }
    CanonicalSpec::new(blocks).sorted()
}

/// `U ∈ Ω_{2n}` unitary: Gram–Schmidt on random columns against earlier
/// columns and their `tau` images.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Result<OmegaMatrix> {
    let mut cols: Vec<CVec> = Vec::with_capacity(2 * n);
    let mut first = Vec::with_capacity(n);
    while first.len() < n {
        let mut v = CVec::from_fn(2 * n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        for _ in 0..2 {
            for q in &cols {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm < 1e-6 {
            continue;
        }
        v.unscale_mut(norm);
        cols.push(tau(&v));
        cols.push(v.clone());
        first.push(v);
    }
    OmegaMatrix::from_first_half(&CMat::from_columns(&first))
}

/// Scrambler `U₁ ω(diag σ) U₂` with `σ` log-uniform in `[1, 100]`.
fn scrambler(rng: &mut ChaCha8Rng, n: usize) -> Result<OmegaMatrix> {
    let u1 = random_unitary(rng, n)?;
    let u2 = random_unitary(rng, n)?;
    let sigma: Vec<Complex64> = (0..n).map(|_| c(10f64.powf(2.0 * rng.random::<f64>()), 0.0)).collect();
    let d = OmegaMatrix::from_complex_copy(&CMat::from_diagonal(&CVec::from_vec(sigma)));
    Ok(&(&u1 * &d) * &u2)
}

/// Seeded instance drawn from `profile`, scrambled by a random `Y ∈ Ω` with `cond(Y) ≤ 100`.
pub fn random_instance(seed: u64, profile: &Profile) -> Result<Instance> {
    profile.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = None;
    for _ in 0..256 {
        let s = draw_spec(&mut rng, profile);
        if s.blocks.is_empty() {
            continue;
        }
        let ok = match profile.force {
            Force::Any => true,
            Force::Admit => root_exists(&s, profile.m)?.exists,
            Force::Refuse => !root_exists(&s, profile.m)?.exists,
        };
        if ok {
            spec = Some(s);
            break;
        }
    }
    let spec = spec.ok_or_else(|| QrootError::ProfileInvalid("no spec satisfying the profile was found".into()))?;
    let (bc, hc) = materialize_pair(&spec)?;
    let y = scrambler(&mut rng, spec.half_dim())?;
    let yi = y.inverse()?;
    let b = &(&y * &bc) * &yi;
    let h = &(&yi.adjoint() * &hc) * &yi;
    let hm = h.as_matrix();
    let h_sym = OmegaMatrix::from_complex_default(&((hm + hm.adjoint()) * c(0.5, 0.0)))?;
    let b = OmegaMatrix::from_complex_default(b.as_matrix())?;
    Ok(Instance { b: omega::omega_to_quat(&b), h: omega::omega_to_quat(&h_sym), spec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::roots::CertificateKind;

    fn profile(classes: Vec<EigenClass>, m: usize, force: Force) -> Profile {
        Profile { classes, max_size: 6, m, force }
    }

    #[test]
    fn unitary_scrambler_is_unitary_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_unitary(&mut rng, 4).unwrap();
        let g = u.as_matrix().adjoint() * u.as_matrix();
        assert!(linalg::frobenius(&(g - CMat::identity(8, 8))) < 1e-12);
        let y = scrambler(&mut rng, 4).unwrap();
        let sv = linalg::singular_values(y.as_matrix());
        assert!(sv[0] / sv[sv.len() - 1] <= 100.0 * (1.0 + 1e-10));
    }

    #[test]
    fn seeded_instances_are_reproducible() {
        let p = profile(vec![EigenClass::Positive, EigenClass::Nonreal], 3, Force::Any);
        let a = random_instance(1, &p).unwrap();
        let b = random_instance(1, &p).unwrap();
        assert_eq!(a.b, b.b);
        assert_eq!(a.h, b.h);
        assert_eq!(a.spec, b.spec);
    }

    #[test]
    fn forced_refusal_refuses() {
        let p = profile(vec![EigenClass::Negative], 2, Force::Refuse);
        let inst = random_instance(2, &p).unwrap();
        let d = root_exists(&inst.spec, 2).unwrap();
        assert_eq!(d.certificate.unwrap().kind, CertificateKind::NegativeSignPairing);
    }

    #[test]
    fn invalid_profiles() {
        assert!(matches!(random_instance(0, &profile(vec![], 2, Force::Any)), Err(QrootError::ProfileInvalid(_))));
        let mut p = profile(vec![EigenClass::Positive], 2, Force::Any);
        p.max_size = 17;
        assert!(matches!(random_instance(0, &p), Err(QrootError::ProfileInvalid(_))));
        let p = profile(vec![EigenClass::Positive], 2, Force::Refuse);
        assert!(matches!(random_instance(0, &p), Err(QrootError::ProfileInvalid(_))));
    }
}
