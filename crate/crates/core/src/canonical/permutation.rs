use crate::error::{QrootError, Result};
use crate::linalg::{self, CMat};

/// Real block permutation used to merge direct sums of Ω-level pieces.
///
/// The input is viewed as `2t` diagonal blocks `X_1, Y_1, …, X_t, Y_t` where
/// `X_j` and `Y_j` both have size `sizes[j]`. Block row `i ≤ t` selects block
/// column `2i − 1` and block row `i > t` selects block column `2(i − t)`, so
/// `P (⊕_j (X_j ⊕ Y_j)) P*` is `(⊕_j X_j) ⊕ (⊕_j Y_j)`.
pub fn interleave_permutation_real(t: usize, sizes: &[usize]) -> Result<Vec<Vec<f64>>> {
    if sizes.len() != t {
        return Err(QrootError::SizeMismatch(format!("expected {t} block sizes, got {}", sizes.len())));
    }
    if sizes.contains(&0) {
        return Err(QrootError::SizeMismatch("block sizes must be positive".into()));
    }
    // column offsets of the interleaved input X_1, Y_1, X_2, Y_2, ...
    let mut col_offsets = Vec::with_capacity(2 * t);
    let mut acc = 0;
    for &s in sizes {
        col_offsets.push(acc);
        col_offsets.push(acc + s);
        acc += 2 * s;
    }
    let total = acc;
    let mut p = vec![vec![0.0; total]; total];
    let mut row = 0;
    for half in 0..2 {
        for (j, &s) in sizes.iter().enumerate() {
            let col = col_offsets[2 * j + half];
            for d in 0..s {
                p[row + d][col + d] = 1.0;
            }
            row += s;
        }
    }
    Ok(p)
}

/// Complex form of [`interleave_permutation_real`].
pub fn interleave_permutation(t: usize, sizes: &[usize]) -> Result<CMat> {
    let p = interleave_permutation_real(t, sizes)?;
    let n = p.len();
    Ok(linalg::real_matrix(n, n, |i, j| p[i][j]))
}
