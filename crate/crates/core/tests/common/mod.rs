#![allow(dead_code)]

use std::collections::HashSet;

use dilation_core::extension::check_interpolation;
use dilation_core::{PiecewiseLinear, ShiftVector};
use rand::Rng;

pub fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Every positive reduced fraction `p/q` with `p, q <= limit` that equals
/// `(2+3k)/(1+3m)` or `(1+3m)/(2+3k)` for some `(m, k)` in `[-range, range]^2`.
pub fn brute_force_ratio_set(range: i64, limit: i64) -> HashSet<(i64, i64)> {
    let mut set = HashSet::new();
    let mut insert = |num: i64, den: i64| {
        if den == 0 || num == 0 {
            return;
        }
        let sign = if (num < 0) != (den < 0) { -1 } else { 1 };
        if sign < 0 {
            return;
        }
        let g = gcd(num, den);
        let (p, q) = (num.abs() / g, den.abs() / g);
        if p <= limit && q <= limit {
            set.insert((p, q));
        }
    };
    for m in -range..=range {
        for k in -range..=range {
            insert(2 + 3 * k, 1 + 3 * m);
            insert(1 + 3 * m, 2 + 3 * k);
        }
    }
    set
}

pub fn reduced_fractions(limit: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in 1..=limit {
        for q in 1..=limit {
            if gcd(p as i64, q as i64) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Strictly increasing shifts with gaps of at least `min_gap`.
pub fn random_shifts<R: Rng>(rng: &mut R, n: usize, min_gap: f64, max_gap: f64) -> ShiftVector {
    let mut acc = 0.0;
    let entries = (0..n)
        .map(|_| {
            acc += rng.gen_range(min_gap..max_gap);
            acc
        })
        .collect();
    ShiftVector::new(entries).unwrap()
}

/// Random piecewise-linear data on `[0, b_N]` with nodes at every shift, moved by
/// a constant so the interpolation condition holds.
pub fn random_boundary<R: Rng>(rng: &mut R, b: &ShiftVector, interior: usize) -> PiecewiseLinear {
    let top = b.last();
    let mut xs: Vec<f64> = std::iter::once(0.0).chain(b.entries().iter().copied()).collect();
    for _ in 0..interior {
        xs.push(rng.gen_range(0.0..top));
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-3 * top);
    if *xs.last().unwrap() != top {
        xs.pop();
        xs.push(top);
    }
    let ys: Vec<f64> = xs.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let raw = PiecewiseLinear::new(xs.clone(), ys.clone()).unwrap();
    let r = check_interpolation(&raw, b).unwrap();
    let c = r / (b.len() + 1) as f64;
    PiecewiseLinear::new(xs, ys.into_iter().map(|y| y - c).collect()).unwrap()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Laplace expansion along the first row.
pub fn cofactor_determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0.0;
    for col in 0..n {
        let minor: Vec<Vec<f64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][col] * cofactor_determinant(&minor);
    }
    det
}
