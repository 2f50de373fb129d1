//! Continuous piecewise-linear functions on a closed interval.

use crate::error::{Error, Result};

/// A continuous function on `[breakpoints[0], breakpoints[last]]`, linear between
/// consecutive breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

/// Relative spacing below which two breakpoints are treated as one.
pub const MERGE_SPACING: f64 = 1e-12;

/// Two merged breakpoints must carry values this close (scaled by `max(1, |v|)`).
pub const MERGE_VALUE_TOL: f64 = 1e-9;

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidPiecewise(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPiecewise(
                "at least two breakpoints are required".into(),
            ));
        }
        if breakpoints.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPiecewise("non-finite entry".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPiecewise(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    /// Linear interpolation of samples. Any structure of the sampled function
    /// between sample points is lost.
    pub fn from_samples(xs: &[f64], ys: &[f64]) -> Result<Self> {
        Self::new(xs.to_vec(), ys.to_vec())
    }

    /// Builds from `(x, value)` pairs sorted by `x`, merging points closer than
    /// [`MERGE_SPACING`] relative to `max(1, |x|)`.
    pub(crate) fn from_sorted_points(points: &[(f64, f64)]) -> Result<Self> {
        let merged = merge_close(points)?;
        let (breakpoints, values) = merged.into_iter().unzip();
        Self::new(breakpoints, values)
    }

    pub fn constant(lo: f64, hi: f64, value: f64) -> Result<Self> {
        Self::new(vec![lo, hi], vec![value, value])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1])
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        lo <= x && x <= hi
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(lo <= x && x <= hi) {
            return Err(Error::OutOfCoverage { x, lo, hi });
        }
        Ok(self.interpolate(x))
    }

    fn interpolate(&self, x: f64) -> f64 {
        let xs = &self.breakpoints;
        let i = xs.partition_point(|&b| b <= x);
        if i == 0 {
            return self.values[0];
        }
        if i == xs.len() {
            return self.values[xs.len() - 1];
        }
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
    }

    /// `x -> self(x - c)`, defined on the domain moved by `c`.
    pub fn translate(&self, c: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.iter().map(|x| x + c).collect(),
            values: self.values.clone(),
        }
    }

    /// `x -> k * self(x)`.
    pub fn scale(&self, k: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }

    /// Pointwise sum on the intersection of both domains.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a_lo, a_hi) = self.domain();
        let (b_lo, b_hi) = other.domain();
        let (lo, hi) = (a_lo.max(b_lo), a_hi.min(b_hi));
        if !(lo < hi) {
            return Err(Error::DomainMismatch {
                expected_lo: a_lo,
                expected_hi: a_hi,
                found_lo: b_lo,
                found_hi: b_hi,
            });
        }
        let mut xs: Vec<f64> = std::iter::once(lo)
            .chain(self.breakpoints.iter().copied())
            .chain(other.breakpoints.iter().copied())
            .chain(std::iter::once(hi))
            .filter(|&x| lo <= x && x <= hi)
            .collect();
        xs.sort_by(f64::total_cmp);
        let points: Vec<(f64, f64)> = xs
            .into_iter()
            .map(|x| (x, self.interpolate(x) + other.interpolate(x)))
            .collect();
        Self::from_sorted_points(&points)
    }

    /// Restriction to `[lo, hi]`, which must lie inside the domain.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<Self> {
        let (d_lo, d_hi) = self.domain();
        if !(d_lo <= lo && lo < hi && hi <= d_hi) {
            return Err(Error::DomainMismatch {
                expected_lo: d_lo,
                expected_hi: d_hi,
                found_lo: lo,
                found_hi: hi,
            });
        }
        let mut points = vec![(lo, self.interpolate(lo))];
        points.extend(
            self.breakpoints
                .iter()
                .zip(&self.values)
                .filter(|(&x, _)| lo < x && x < hi)
                .map(|(&x, &v)| (x, v)),
        );
        points.push((hi, self.interpolate(hi)));
        Self::from_sorted_points(&points)
    }
}

pub(crate) fn too_close(a: f64, b: f64) -> bool {
    (b - a).abs() <= MERGE_SPACING * a.abs().max(b.abs()).max(1.0)
}

/// Collapses runs of nearly coincident abscissae, keeping the first of each run.
/// The last point of the input is always kept so interval ends stay exact.
pub(crate) fn merge_close(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for (i, &(x, v)) in points.iter().enumerate() {
        if let Some(&(px, pv)) = out.last() {
            if too_close(px, x) {
                if (pv - v).abs() > MERGE_VALUE_TOL * pv.abs().max(v.abs()).max(1.0) {
                    return Err(Error::InternalInconsistency {
                        w: x,
                        left: pv,
                        right: v,
                    });
                }
                if i == points.len() - 1 && out.len() > 1 {
                    *out.last_mut().unwrap() = (x, v);
                }
                continue;
            }
        }
        out.push((x, v));
    }
    Ok(out)
}
