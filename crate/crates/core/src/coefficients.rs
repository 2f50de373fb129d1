//! Coefficient data of the dilation equation
//! `f(x) + f(a_1 x) + ... + f(a_N x) = 0`, its additive counterpart with
//! shifts `b_k = ln a_k`, and the regularity index `m(a)`.

use crate::error::{Error, Result};

/// Normalized dilation factors `1 < a_1 < ... < a_N` (with the implicit `a_0 = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    entries: Vec<f64>,
}

impl CoefficientVector {
    /// Wraps entries that are already normalized.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut prev = 1.0;
        for &a in &entries {
            if !a.is_finite() || a <= 0.0 {
                return Err(Error::NonPositiveEntry(a));
            }
            if a == 1.0 {
                return Err(Error::UnitEntry(a));
            }
            if a == prev {
                return Err(Error::DuplicateEntry(a));
            }
            if a < prev {
                return Err(Error::InvalidRange(format!(
                    "coefficients must satisfy 1 < a_1 < ... < a_N, found {a} after {prev}"
                )));
            }
            prev = a;
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Number of non-trivial factors `N`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest factor `a_N`.
    pub fn last(&self) -> f64 {
        self.entries[self.entries.len() - 1]
    }

    /// `(a_0, a_1, ..., a_N)` with `a_0 = 1` prepended.
    pub fn with_unit(&self) -> Vec<f64> {
        std::iter::once(1.0).chain(self.entries.iter().copied()).collect()
    }

    /// Shifts `b_k = ln a_k` of the additive form obtained with `x = e^w`.
    pub fn to_additive(&self) -> ShiftVector {
        ShiftVector {
            entries: self.entries.iter().map(|a| a.ln()).collect(),
        }
    }
}

/// Additive shifts `0 < b_1 < ... < b_N` (with the implicit `b_0 = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftVector {
    entries: Vec<f64>,
}

impl ShiftVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut prev = 0.0;
        for &b in &entries {
            if !b.is_finite() || b <= prev {
                return Err(Error::InvalidShifts);
            }
            prev = b;
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `b_1`.
    pub fn first(&self) -> f64 {
        self.entries[0]
    }

    /// `b_N`.
    pub fn last(&self) -> f64 {
        self.entries[self.entries.len() - 1]
    }

    /// `b_{N-1}`, which is `b_0 = 0` when `N = 1`.
    pub fn second_to_last(&self) -> f64 {
        let n = self.entries.len();
        if n >= 2 {
            self.entries[n - 2]
        } else {
            0.0
        }
    }

    /// Back to multiplicative factors `a_k = exp(b_k)`.
    pub fn to_multiplicative(&self) -> CoefficientVector {
        CoefficientVector {
            entries: self.entries.iter().map(|b| b.exp()).collect(),
        }
    }

    /// Entrywise multiplication by `d > 0`.
    pub fn scaled(&self, d: f64) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NonPositiveScale(d));
        }
        Ok(Self {
            entries: self.entries.iter().map(|b| b * d).collect(),
        })
    }
}

impl AsRef<[f64]> for ShiftVector {
    fn as_ref(&self) -> &[f64] {
        &self.entries
    }
}

/// Brings arbitrary positive factors (none equal to 1) into the normalized form `1 < a_1`.
///
/// When the smallest factor is below 1 the substitution `y = a_1 x` is applied,
/// which divides every factor by `a_1` and turns the implicit `a_0 = 1` into `1/a_1`.
pub fn normalize(raw: &[f64]) -> Result<CoefficientVector> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    for &a in raw {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::NonPositiveEntry(a));
        }
        if a == 1.0 {
            return Err(Error::UnitEntry(a));
        }
    }
    let mut sorted = raw.to_vec();
    sorted.sort_by(f64::total_cmp);
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateEntry(w[0]));
    }

    let smallest = sorted[0];
    if smallest > 1.0 {
        return CoefficientVector::new(sorted);
    }
    let mut entries: Vec<f64> = sorted[1..].iter().map(|a| a / smallest).collect();
    entries.push(1.0 / smallest);
    entries.sort_by(f64::total_cmp);
    CoefficientVector::new(entries)
}

/// The least `m` making `sum_{k<N} (a_k / a_N)^m` a contraction, with the
/// Riemann-sum bounds on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityIndex {
    pub m: u32,
    /// `sum_{k=0}^{N-1} (a_k / a_N)^m`, strictly below 1.
    pub contraction: f64,
    /// The same sum at exponent `m - 1`; at least 1 by minimality.
    pub previous_sum: f64,
    /// `a_N / (2 max gap) - 1`, reported without clamping.
    pub lower_bound: f64,
    /// `a_N / min gap`.
    pub upper_bound: f64,
}

/// `sum_{k=0}^{N-1} (a_k / a_N)^m` with `a_0 = 1`.
pub fn contraction_sum(a: &CoefficientVector, m: u32) -> f64 {
    let full = a.with_unit();
    let top = a.last();
    full[..full.len() - 1]
        .iter()
        .map(|ak| (ak / top).powi(m as i32))
        .sum()
}

/// Lower and upper Riemann-sum estimates of `m(a)`.
pub fn regularity_bounds(a: &CoefficientVector) -> (f64, f64) {
    let full = a.with_unit();
    let (mut min_gap, mut max_gap) = (f64::INFINITY, 0.0_f64);
    for w in full.windows(2) {
        let gap = w[1] - w[0];
        min_gap = min_gap.min(gap);
        max_gap = max_gap.max(gap);
    }
    let top = a.last();
    (0.5 * top / max_gap - 1.0, top / min_gap)
}

pub fn regularity_index(a: &CoefficientVector) -> Result<RegularityIndex> {
    let (lower_bound, upper_bound) = regularity_bounds(a);
    // m <= upper_bound is guaranteed; the extra slack only absorbs rounding.
    let stop = upper_bound.ceil() + 1.0;
    let mut previous_sum = a.len() as f64;
    let mut m = 1u32;
    loop {
        let sum = contraction_sum(a, m);
        if sum < 1.0 {
            return Ok(RegularityIndex {
                m,
                contraction: sum,
                previous_sum,
                lower_bound,
                upper_bound,
            });
        }
        if f64::from(m) > stop {
            return Err(Error::RegularityNotFound(upper_bound));
        }
        previous_sum = sum;
        m += 1;
    }
}
