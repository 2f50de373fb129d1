//! Hankel determinants `det[f(x + (i+j) h)]_{i,j=0..n}`.
//!
//! They vanish identically for exponential polynomials of order at most `n`, so a
//! clearly nonzero value is evidence that `f` is not one.

use crate::error::{Error, Result};
use crate::extension::Evaluable;

/// Determinant of the `(n+1) x (n+1)` Hankel matrix `M[i][j] = f(x + (i+j) h)`.
pub fn popoviciu_determinant<F: Evaluable + ?Sized>(f: &F, x: f64, h: f64, n: usize) -> Result<f64> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::InvalidRange(format!("step h = {h} must be nonzero")));
    }
    if n == 0 {
        return Err(Error::InvalidRange("order n must be at least 1".into()));
    }
    let samples = (0..=2 * n)
        .map(|k| f.try_eval(x + k as f64 * h))
        .collect::<Result<Vec<f64>>>()?;
    let size = n + 1;
    let mut m: Vec<Vec<f64>> = (0..size)
        .map(|i| samples[i..i + size].to_vec())
        .collect();
    Ok(determinant(&mut m))
}

/// Determinant by Gaussian elimination with partial pivoting; consumes `m`.
pub fn determinant(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for row in col + 1..n {
            let factor = m[row][col] / p;
            if factor != 0.0 {
                for k in col..n {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
    }
    det
}
