use num_complex::Complex64;

use crate::error::{QrootError, Result};
use crate::linalg::{self, CMat};

/// Jordan block sizes at one eigenvalue, non-increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct SegreSequence {
    pub eigenvalue: Complex64,
    pub parts: Vec<usize>,
}

impl SegreSequence {
    pub fn new(eigenvalue: Complex64, mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        SegreSequence { eigenvalue, parts }
    }

    /// True when every part value occurs an even number of times.
    pub fn is_doubled(&self) -> bool {
        let mut i = 0;
        while i < self.parts.len() {
            let v = self.parts[i];
            let run = self.parts[i..].iter().take_while(|&&p| p == v).count();
            if run % 2 == 1 {
                return false;
            }
            i += run;
        }
        true
    }

    /// Keeps every second part, i.e. one copy of a doubled sequence.
    pub fn halved(&self) -> Option<SegreSequence> {
        if !self.is_doubled() {
            return None;
        }
        Some(SegreSequence { eigenvalue: self.eigenvalue, parts: self.parts.iter().step_by(2).copied().collect() })
    }
}

/// Block sizes from a rank staircase `r_0 = n, r_1, r_2, …` that ends once it
/// stabilizes. The number of parts `≥ p` is `r_{p−1} − r_p`.
pub(crate) fn parts_from_staircase(ranks: &[usize]) -> Vec<usize> {
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for (p, &count) in at_least.iter().enumerate() {
        let next = at_least.get(p + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(p + 1, count - next));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Segre characteristic of `m` at `lambda` from the rank staircase of
/// `(m − λI)^p`, with singular values thresholded at the absolute `tau_rank`.
pub fn segre_characteristic(m: &CMat, lambda: Complex64, tau_rank: f64) -> Result<SegreSequence> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(QrootError::DimensionMismatch("Segre characteristic needs a square matrix".into()));
    }
    let shifted = m - CMat::identity(n, n) * lambda;
    let mut ranks = vec![n];
    let mut power = CMat::identity(n, n);
    loop {
        power = &power * &shifted;
        let r = linalg::rank_checked(&power, tau_rank)?;
        let prev = *ranks.last().expect("non-empty");
        if r > prev {
            return Err(QrootError::Numerical("rank staircase increased".into()));
        }
        if r == prev {
            break;
        }
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    // a trailing equal rank is not a step
    Ok(SegreSequence::new(lambda, parts_from_staircase(&ranks)))
}

/// Same as [`segre_characteristic`] with `τ_rank = 1e−8 · max(1, ‖m − λI‖_F)`.
pub fn segre_characteristic_default(m: &CMat, lambda: Complex64) -> Result<SegreSequence> {
    let n = m.nrows();
    let shifted = m - CMat::identity(n, n) * lambda;
    segre_characteristic(m, lambda, 1e-8 * linalg::frobenius(&shifted).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::jordan_block;
    use crate::linalg::{c, direct_sum};

    #[test]
    fn staircase_to_parts() {
        assert_eq!(parts_from_staircase(&[6, 4, 2, 0]), vec![3, 3]);
        assert_eq!(parts_from_staircase(&[6, 2, 0]), vec![2, 2, 1, 1]);
        assert_eq!(parts_from_staircase(&[3]), Vec::<usize>::new());
    }

    #[test]
    fn segre_examples() {
        let z = c(0., 0.);
        let j3 = jordan_block(z, 3);
        let m = direct_sum(&[j3.clone(), j3]);
        assert_eq!(segre_characteristic_default(&m, z).unwrap().parts, vec![3, 3]);
        let sq = &m * &m;
        assert_eq!(segre_characteristic_default(&sq, z).unwrap().parts, vec![2, 2, 1, 1]);
        let j5 = jordan_block(c(5., 0.), 2);
        assert_eq!(segre_characteristic_default(&j5, c(5., 0.)).unwrap().parts, vec![2]);
        // not an eigenvalue
        assert!(segre_characteristic_default(&j5, c(1., 0.)).unwrap().parts.is_empty());
    }

    #[test]
    fn doubling_helpers() {
        let s = SegreSequence::new(c(0., 0.), vec![2, 3, 3, 2]);
        assert_eq!(s.parts, vec![3, 3, 2, 2]);
        assert!(s.is_doubled());
        assert_eq!(s.halved().unwrap().parts, vec![3, 2]);
        assert!(!SegreSequence::new(c(0., 0.), vec![2, 1]).is_doubled());
    }
}
