//! Continuous periodic solutions of `g(w) + g(w + b_1) + ... + g(w + b_N) = 0`.
//!
//! A nonzero continuous periodic solution exists iff some real `alpha` solves
//! `1 + sum cos(alpha b_k) = 0` and `sum sin(alpha b_k) = 0`; then every
//! `a cos(alpha x) + b sin(alpha x)` is a solution. The functions here accept the
//! shifts as a plain slice so that repeated shifts such as `g(x) + 2 g(x + a)` can
//! be examined too.

use std::f64::consts::PI;

use crate::coefficients::ShiftVector;
use crate::error::{Error, Result};

/// Default acceptance threshold on [`system_residual`].
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-16;

/// Width to which each bracketed minimum is refined.
const REFINE_WIDTH: f64 = 1e-14;

/// `(1 + sum cos(alpha b_k))^2 + (sum sin(alpha b_k))^2`, the determinant of the
/// Fourier matrix at frequency `alpha`.
pub fn system_residual(alpha: f64, shifts: &[f64]) -> f64 {
    let (c, s) = trig_sums(alpha, shifts);
    let re = 1.0 + c;
    re * re + s * s
}

fn trig_sums(alpha: f64, shifts: &[f64]) -> (f64, f64) {
    shifts.iter().fold((0.0, 0.0), |(c, s), &b| {
        let (sin, cos) = (alpha * b).sin_cos();
        (c + cos, s + sin)
    })
}

/// The 2x2 map from the `k`-th Fourier coefficients of `g` to those of
/// `g(x) + sum_j g(x + b_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMatrix {
    pub entries: [[f64; 2]; 2],
}

impl FourierMatrix {
    pub fn determinant(&self) -> f64 {
        let [[a, b], [c, d]] = self.entries;
        a * d - b * c
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

/// Matrix for harmonic `k` of base frequency `theta`; sums run over the shifts.
pub fn fourier_matrix(k: u32, theta: f64, shifts: &[f64]) -> FourierMatrix {
    let (c, s) = trig_sums(f64::from(k) * theta, shifts);
    FourierMatrix {
        entries: [[1.0 + c, s], [-s, 1.0 + c]],
    }
}

/// A frequency at which the trigonometric system holds, with a witness solution
/// `a cos(alpha x) + b sin(alpha x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicityCertificate {
    pub alpha: f64,
    pub period: f64,
    pub system_residual: f64,
    pub witness: (f64, f64),
}

impl PeriodicityCertificate {
    pub fn new(alpha: f64, shifts: &[f64]) -> Self {
        Self {
            alpha,
            period: 2.0 * PI / alpha,
            system_residual: system_residual(alpha, shifts),
            witness: (1.0, 0.0),
        }
    }

    /// Same frequency with another member of the two-parameter family.
    pub fn with_witness(self, a: f64, b: f64) -> Self {
        Self {
            witness: (a, b),
            ..self
        }
    }

    pub fn eval_witness(&self, x: f64) -> f64 {
        let (sin, cos) = (self.alpha * x).sin_cos();
        self.witness.0 * cos + self.witness.1 * sin
    }
}

/// Outcome of a frequency scan: the accepted certificates together with the
/// smallest residual seen, which certifies a negative answer when it stays large.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicityScan {
    pub certificates: Vec<PeriodicityCertificate>,
    pub min_residual: f64,
    pub min_alpha: f64,
}

/// Grid step resolving the fastest oscillation `cos(alpha b_N)` with 16 samples
/// per period.
pub fn default_grid_step(shifts: &[f64], alpha_max: f64) -> f64 {
    let top = shifts.iter().fold(0.0_f64, |m, b| m.max(b.abs()));
    let resolve = if top > 0.0 { PI / (8.0 * top) } else { f64::INFINITY };
    resolve.min(alpha_max / 1e4)
}

/// Scans `(0, alpha_max]`, refines every bracketed local minimum of the residual by
/// golden-section search, and accepts minima with residual at most `tol`.
pub fn scan_periodicity(
    shifts: &[f64],
    alpha_max: f64,
    grid_step: f64,
    tol: f64,
) -> Result<PeriodicityScan> {
    if shifts.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(alpha_max > 0.0 && alpha_max.is_finite()) {
        return Err(Error::InvalidRange(format!("alpha_max = {alpha_max}")));
    }
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::InvalidRange(format!("grid_step = {grid_step}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidRange(format!("tol = {tol}")));
    }
    let f = |alpha: f64| system_residual(alpha, shifts);

    let steps = (alpha_max / grid_step).ceil() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| (i as f64 * grid_step).min(alpha_max))
        .collect();
    let values: Vec<f64> = grid.iter().map(|&a| f(a)).collect();

    let mut minima: Vec<(f64, f64)> = Vec::new();
    for i in 1..grid.len() {
        let left = values[i - 1];
        let here = values[i];
        let is_min = if i + 1 < grid.len() {
            here <= left && here <= values[i + 1]
        } else {
            here < left
        };
        if is_min {
            let hi = grid.get(i + 1).copied().unwrap_or(grid[i]);
            let alpha = golden_section(&f, grid[i - 1], hi);
            minima.push((alpha, f(alpha)));
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (alpha, r) in minima {
        match merged.last_mut() {
            Some(last) if (alpha - last.0).abs() <= 1e-9 => {
                if r < last.1 {
                    *last = (alpha, r);
                }
            }
            _ => merged.push((alpha, r)),
        }
    }

    let (min_alpha, min_residual) = merged
        .iter()
        .copied()
        .chain(grid.iter().copied().zip(values.iter().copied()).skip(1))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((grid[0], values[0]));

    let certificates = merged
        .into_iter()
        .filter(|&(alpha, r)| alpha > 0.0 && r <= tol)
        .map(|(alpha, _)| PeriodicityCertificate::new(alpha, shifts))
        .collect();
    Ok(PeriodicityScan {
        certificates,
        min_residual,
        min_alpha,
    })
}

/// Certificates for every frequency in `(0, alpha_max]` solving the system.
pub fn find_periodic_alphas(
    shifts: &[f64],
    alpha_max: f64,
    grid_step: f64,
    tol: f64,
) -> Result<Vec<PeriodicityCertificate>> {
    scan_periodicity(shifts, alpha_max, grid_step, tol).map(|s| s.certificates)
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > REFINE_WIDTH * hi.abs().max(1.0) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        if !(x1 > lo && x2 < hi) {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    [lo, x1, mid, x2, hi]
        .into_iter()
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap()
}

/// `2 m pi / ((N+1) d)` for `m = 1..=m_max` not divisible by `N + 1`: the
/// frequencies solving the system for shifts `(d, 2d, ..., N d)`.
pub fn equispaced_alphas(n: usize, d: f64, m_max: u32) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidOrder { n, min: 1 });
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::NonPositiveScale(d));
    }
    let period = (n + 1) as u32;
    Ok((1..=m_max)
        .filter(|m| m % period != 0)
        .map(|m| 2.0 * f64::from(m) * PI / ((n + 1) as f64 * d))
        .collect())
}

/// `(d b_1, ..., d b_N)`; frequencies of the system scale by `1/d`.
pub fn scale_shifts(b: &ShiftVector, d: f64) -> Result<ShiftVector> {
    b.scaled(d)
}

/// Which of the two ratio families a witness belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioForm {
    /// `p/q = (2 + 3k) / (1 + 3m)`
    Direct,
    /// `p/q = (1 + 3m) / (2 + 3k)`
    Inverted,
}

/// Verdict for `g(x) + g(x + a) + g(x + b) = 0` with `a/b = p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoTermVerdict {
    Exists { k: i64, m: i64, form: RatioForm },
    /// The residues of `p` and `q` modulo 3 are not `{1, 2}`.
    Refuted { p_mod3: u8, q_mod3: u8 },
}

impl TwoTermVerdict {
    pub fn exists(&self) -> bool {
        matches!(self, Self::Exists { .. })
    }

    pub fn witness(&self) -> Option<(i64, i64)> {
        match *self {
            Self::Exists { k, m, .. } => Some((k, m)),
            Self::Refuted { .. } => None,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Decides whether the reduced ratio `p/q` lies in
/// `{(2+3k)/(1+3m), (1+3m)/(2+3k) : k, m integers}`.
///
/// Writing `p/q = (2+3k)/(1+3m)` forces `t p = 2 + 3k`, `t q = 1 + 3m` for some
/// integer `t`, so `p` and `q` are both nonzero modulo 3 and distinct; the same
/// holds for the inverted family. Conversely, such residues give an explicit
/// witness with `t = 1`.
pub fn two_term_periodic_exists(p: u64, q: u64) -> Result<TwoTermVerdict> {
    if q == 0 {
        return Err(Error::ZeroDenominator);
    }
    if p == 0 {
        return Err(Error::InvalidRange("numerator must be positive".into()));
    }
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime(p, q));
    }
    let (pr, qr) = ((p % 3) as u8, (q % 3) as u8);
    let (pi, qi) = (p as i64, q as i64);
    Ok(match (pr, qr) {
        (2, 1) => TwoTermVerdict::Exists {
            k: (pi - 2) / 3,
            m: (qi - 1) / 3,
            form: RatioForm::Direct,
        },
        (1, 2) => TwoTermVerdict::Exists {
            k: (qi - 2) / 3,
            m: (pi - 1) / 3,
            form: RatioForm::Inverted,
        },
        _ => TwoTermVerdict::Refuted {
            p_mod3: pr,
            q_mod3: qr,
        },
    })
}
