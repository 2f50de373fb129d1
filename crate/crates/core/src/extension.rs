//! Unique continuous extension of boundary data on `[0, b_N]` to a solution of
//! `g(w) + g(w + b_1) + ... + g(w + b_N) = 0` on the real line.
//!
//! The extension is built strip by strip. To the right of the covered interval
//! every strip has width `b_N - b_{N-1}` and is filled with
//! `g(y) = -[g(y - b_N) + sum_{j<N} g(y - (b_N - b_j))]`; to the left every strip
//! has width `b_1` and is filled with `g(x) = -sum_j g(x + b_j)`. All arguments on
//! the right-hand sides already lie in covered territory, possibly spread over
//! several earlier strips. Since shifts and sums of piecewise-linear functions are
//! piecewise linear, each strip is represented exactly by evaluating the recursion
//! at the translated breakpoints of the current solution.

use std::collections::VecDeque;

use crate::coefficients::{CoefficientVector, ShiftVector};
use crate::error::{Error, Result};
use crate::pwl::{merge_close, too_close, PiecewiseLinear, MERGE_VALUE_TOL};

/// Default tolerance on `g(0) + g(b_1) + ... + g(b_N)`.
pub const DEFAULT_INTERPOLATION_TOL: f64 = 1e-9;

/// Default cap on the number of breakpoints of an extended solution.
pub const DEFAULT_BREAKPOINT_BUDGET: usize = 1_000_000;

/// Anything that can be sampled at a real point.
pub trait Evaluable {
    fn try_eval(&self, x: f64) -> Result<f64>;
}

impl Evaluable for PiecewiseLinear {
    fn try_eval(&self, x: f64) -> Result<f64> {
        self.eval(x)
    }
}

impl<F: Fn(f64) -> f64> Evaluable for F {
    fn try_eval(&self, x: f64) -> Result<f64> {
        Ok(self(x))
    }
}

/// `x -> g(ln x)` on `(0, inf)`: turns a solution of the additive equation into a
/// solution of the dilation equation with `a_k = e^{b_k}`.
#[derive(Debug, Clone, Copy)]
pub struct LogPullback<'a, G: ?Sized>(pub &'a G);

impl<G: Evaluable + ?Sized> Evaluable for LogPullback<'_, G> {
    fn try_eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::NonPositiveSample(x));
        }
        self.0.try_eval(x.ln())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionOptions {
    pub interpolation_tol: f64,
    pub breakpoint_budget: usize,
}

impl Default for ExtensionOptions {
    fn default() -> Self {
        Self {
            interpolation_tol: DEFAULT_INTERPOLATION_TOL,
            breakpoint_budget: DEFAULT_BREAKPOINT_BUDGET,
        }
    }
}

/// `g(0) + g(b_1) + ... + g(b_N)` for boundary data on `[0, b_N]`.
pub fn check_interpolation(g: &PiecewiseLinear, b: &ShiftVector) -> Result<f64> {
    let (lo, hi) = g.domain();
    let top = b.last();
    let slack = 1e-12 * top.max(1.0);
    if lo.abs() > slack || (hi - top).abs() > slack {
        return Err(Error::DomainMismatch {
            expected_lo: 0.0,
            expected_hi: top,
            found_lo: lo,
            found_hi: hi,
        });
    }
    let edge = |x: f64| g.eval(x.clamp(lo, hi));
    let mut residual = edge(0.0)?;
    for &bk in b.entries() {
        residual += edge(bk)?;
    }
    Ok(residual)
}

/// Boundary data equal to 1 on `[0, b_{N-1}]`, then linear down to `-N` at `b_N`.
///
/// It satisfies the interpolation condition and has a corner at `b_{N-1}`, so its
/// extension is a continuous solution that is not an exponential polynomial.
/// For `N = 1` the plateau is the single point 0.
pub fn tent_boundary(b: &ShiftVector) -> PiecewiseLinear {
    let n = b.len();
    let top = b.last();
    let (xs, vs) = if n == 1 {
        (vec![0.0, top], vec![1.0, -1.0])
    } else {
        (
            vec![0.0, b.second_to_last(), top],
            vec![1.0, 1.0, -(n as f64)],
        )
    };
    PiecewiseLinear::new(xs, vs).expect("shift vector invariants give increasing breakpoints")
}

/// One period of the `(N+1)`-periodic solution obtained from the tent data with
/// shifts `(1, 2, ..., N)`.
pub fn periodic_reference(n: usize) -> Result<PiecewiseLinear> {
    if n < 2 {
        return Err(Error::InvalidOrder { n, min: 2 });
    }
    let nf = n as f64;
    PiecewiseLinear::new(
        vec![0.0, nf - 1.0, nf, nf + 1.0],
        vec![1.0, 1.0, -nf, 1.0],
    )
}

/// A solution of the additive equation on a covered interval containing `[0, b_N]`.
#[derive(Debug, Clone)]
pub struct ExtendedSolution {
    shifts: ShiftVector,
    boundary: PiecewiseLinear,
    boundary_residual: f64,
    options: ExtensionOptions,
    right_strips: usize,
    left_strips: usize,
    pieces: PiecewiseLinear,
}

impl ExtendedSolution {
    /// Validates boundary data on `[0, b_N]` without extending it.
    pub fn new(boundary: PiecewiseLinear, b: ShiftVector, options: ExtensionOptions) -> Result<Self> {
        let residual = check_interpolation(&boundary, &b)?;
        if !(residual.abs() <= options.interpolation_tol) {
            return Err(Error::InterpolationViolated {
                residual,
                tol: options.interpolation_tol,
            });
        }
        if boundary.len() > options.breakpoint_budget {
            return Err(Error::CoverageBudgetExceeded(options.breakpoint_budget));
        }
        Ok(Self {
            shifts: b,
            pieces: boundary.clone(),
            boundary,
            boundary_residual: residual,
            options,
            right_strips: 0,
            left_strips: 0,
        })
    }

    pub fn shifts(&self) -> &ShiftVector {
        &self.shifts
    }

    pub fn boundary(&self) -> &PiecewiseLinear {
        &self.boundary
    }

    /// The interpolation residual of the boundary data.
    pub fn boundary_residual(&self) -> f64 {
        self.boundary_residual
    }

    pub fn covered(&self) -> (f64, f64) {
        self.pieces.domain()
    }

    pub fn pieces(&self) -> &PiecewiseLinear {
        &self.pieces
    }

    pub fn evaluate(&self, w: f64) -> Result<f64> {
        self.pieces.eval(w)
    }

    /// Grows the covered interval until it contains `[lo, hi]`.
    pub fn extend_to(&mut self, lo: f64, hi: f64) -> Result<()> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidTarget(lo, hi));
        }
        let b = self.shifts.entries();
        let top = self.shifts.last();
        let step_right = top - self.shifts.second_to_last();
        let step_left = self.shifts.first();
        if !(step_right > 0.0) {
            return Err(Error::DegenerateStep(step_right));
        }
        if !(step_left > 0.0) {
            return Err(Error::DegenerateStep(step_left));
        }

        let mut points: VecDeque<(f64, f64)> = self
            .pieces
            .breakpoints()
            .iter()
            .copied()
            .zip(self.pieces.values().iter().copied())
            .collect();
        let join_tol = |v: f64| MERGE_VALUE_TOL * v.abs().max(1.0) + self.boundary_residual.abs();

        // y - c for c in {b_N, b_N - b_1, ..., b_N - b_{N-1}}
        let right_offsets: Vec<f64> = std::iter::once(top)
            .chain(b[..b.len() - 1].iter().map(|bj| top - bj))
            .collect();

        let mut cover_hi = points.back().unwrap().0;
        while cover_hi < hi {
            let start = cover_hi;
            let end = top + (self.right_strips + 1) as f64 * step_right;
            let strip = build_strip(&points, start, end, &right_offsets, -1.0)?;
            let (x0, v0) = strip[0];
            let existing = points.back().unwrap().1;
            if !too_close(x0, start) || (v0 - existing).abs() > join_tol(existing) {
                return Err(Error::InternalInconsistency {
                    w: start,
                    left: existing,
                    right: v0,
                });
            }
            points.extend(strip.into_iter().skip(1));
            self.right_strips += 1;
            cover_hi = end;
            if points.len() > self.options.breakpoint_budget {
                return Err(Error::CoverageBudgetExceeded(self.options.breakpoint_budget));
            }
        }

        // x + c for c in {b_1, ..., b_N}
        let mut cover_lo = points.front().unwrap().0;
        while cover_lo > lo {
            let end = cover_lo;
            let start = -((self.left_strips + 1) as f64) * step_left;
            let strip = build_strip(&points, start, end, b, 1.0)?;
            let (xl, vl) = strip[strip.len() - 1];
            let existing = points.front().unwrap().1;
            if !too_close(xl, end) || (vl - existing).abs() > join_tol(existing) {
                return Err(Error::InternalInconsistency {
                    w: end,
                    left: vl,
                    right: existing,
                });
            }
            for &p in strip[..strip.len() - 1].iter().rev() {
                points.push_front(p);
            }
            self.left_strips += 1;
            cover_lo = start;
            if points.len() > self.options.breakpoint_budget {
                return Err(Error::CoverageBudgetExceeded(self.options.breakpoint_budget));
            }
        }

        let (xs, vs): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        self.pieces = PiecewiseLinear::new(xs, vs)?;
        Ok(())
    }
}

impl Evaluable for ExtendedSolution {
    fn try_eval(&self, x: f64) -> Result<f64> {
        self.evaluate(x)
    }
}

/// Extends boundary data on `[0, b_N]` to a solution covering `target`.
pub fn extend(
    boundary: &PiecewiseLinear,
    b: &ShiftVector,
    target: (f64, f64),
) -> Result<ExtendedSolution> {
    extend_with(boundary, b, target, ExtensionOptions::default())
}

pub fn extend_with(
    boundary: &PiecewiseLinear,
    b: &ShiftVector,
    target: (f64, f64),
    options: ExtensionOptions,
) -> Result<ExtendedSolution> {
    let (lo, hi) = target;
    if !(lo <= 0.0 && hi >= b.last()) {
        return Err(Error::InvalidTarget(lo, hi));
    }
    let mut sol = ExtendedSolution::new(boundary.clone(), b.clone(), options)?;
    sol.extend_to(lo, hi)?;
    Ok(sol)
}

fn eval_points(points: &VecDeque<(f64, f64)>, x: f64) -> f64 {
    let (lo, hi) = (points.front().unwrap().0, points.back().unwrap().0);
    let x = x.clamp(lo, hi);
    let i = points.partition_point(|p| p.0 <= x);
    if i == 0 {
        return points[0].1;
    }
    if i == points.len() {
        return points[i - 1].1;
    }
    let (x0, y0) = points[i - 1];
    let (x1, y1) = points[i];
    y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
}

/// Values of `-sum_c g(x + sign * c)` on `[start, end]`, sampled at the strip ends
/// and at every breakpoint of `g` carried into the strip by one of the offsets.
fn build_strip(
    points: &VecDeque<(f64, f64)>,
    start: f64,
    end: f64,
    offsets: &[f64],
    sign: f64,
) -> Result<Vec<(f64, f64)>> {
    let mut xs = vec![start, end];
    for &c in offsets {
        let shift = sign * c;
        let (src_lo, src_hi) = (start + shift, end + shift);
        let first = points.partition_point(|p| p.0 <= src_lo);
        xs.extend(
            points
                .range(first..)
                .take_while(|p| p.0 < src_hi)
                .map(|p| p.0 - shift)
                .filter(|&x| start < x && x < end),
        );
    }
    xs.sort_by(f64::total_cmp);
    let strip: Vec<(f64, f64)> = xs
        .into_iter()
        .map(|x| {
            let sum: f64 = offsets
                .iter()
                .map(|&c| eval_points(points, x + sign * c))
                .sum();
            (x, -sum)
        })
        .collect();
    merge_close(&strip)
}

/// Largest `|g(w) + g(w + b_1) + ... + g(w + b_N)|` over the grid.
pub fn residual_additive<G: Evaluable + ?Sized>(g: &G, shifts: &[f64], grid: &[f64]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &w in grid {
        let mut sum = g.try_eval(w)?;
        for &bk in shifts {
            sum += g.try_eval(w + bk)?;
        }
        worst = worst.max(sum.abs());
    }
    Ok(worst)
}

/// Largest `|f(x) + f(a_1 x) + ... + f(a_N x)|` over a grid of positive points.
pub fn residual_multiplicative<F: Evaluable + ?Sized>(
    f: &F,
    a: &CoefficientVector,
    grid: &[f64],
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &x in grid {
        if !(x > 0.0) {
            return Err(Error::NonPositiveSample(x));
        }
        let mut sum = f.try_eval(x)?;
        for &ak in a.entries() {
            sum += f.try_eval(ak * x)?;
        }
        worst = worst.max(sum.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shifts(v: &[f64]) -> ShiftVector {
        ShiftVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn interpolation_residuals() {
        let b = shifts(&[1.0, 2.0]);
        assert_eq!(check_interpolation(&tent_boundary(&b), &b).unwrap(), 0.0);
        let one = PiecewiseLinear::constant(0.0, 2.0, 1.0).unwrap();
        assert_eq!(check_interpolation(&one, &b).unwrap(), 3.0);

        let b1 = shifts(&[1.0]);
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (std::f64::consts::PI * x).cos()).collect();
        let cos = PiecewiseLinear::from_samples(&xs, &ys).unwrap();
        assert!(check_interpolation(&cos, &b1).unwrap().abs() < 1e-15);

        let wrong = PiecewiseLinear::constant(0.0, 3.0, 0.0).unwrap();
        assert!(matches!(
            check_interpolation(&wrong, &b),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn tent_shapes() {
        let g = tent_boundary(&shifts(&[1.0, 2.0]));
        assert_eq!(g.breakpoints(), &[0.0, 1.0, 2.0]);
        assert_eq!(g.values(), &[1.0, 1.0, -2.0]);
        let g = tent_boundary(&shifts(&[1.0, 2.0, 3.0]));
        for (x, v) in [(0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (3.0, -3.0)] {
            assert_eq!(g.eval(x).unwrap(), v);
        }
        let b = shifts(&[2f64.ln(), 3f64.ln()]);
        assert_eq!(tent_boundary(&b).eval(3f64.ln()).unwrap(), -2.0);
        let g = tent_boundary(&shifts(&[0.7]));
        assert_eq!(g.values(), &[1.0, -1.0]);
    }

    #[test]
    fn one_step_each_way() {
        let b = shifts(&[1.0, 2.0]);
        let g = tent_boundary(&b);
        let sol = extend(&g, &b, (0.0, 3.0)).unwrap();
        assert!((sol.evaluate(2.5).unwrap() + 0.5).abs() < 1e-15);
        for y in [2.1, 2.5, 2.9, 3.0] {
            assert!((sol.evaluate(y).unwrap() - (3.0 * y - 8.0)).abs() < 1e-14);
        }
        let sol = extend(&g, &b, (-1.0, 2.0)).unwrap();
        assert!((sol.evaluate(-0.5).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(
            sol.evaluate(2.5),
            Err(Error::OutOfCoverage { .. })
        ));
    }

    #[test]
    fn three_shift_backward_step() {
        let b = shifts(&[1.0, 2.0, 3.0]);
        let sol = extend(&tent_boundary(&b), &b, (-1.0, 8.0)).unwrap();
        assert!(sol.evaluate(-0.25).unwrap().abs() < 1e-14);
        assert_eq!(sol.evaluate(0.0).unwrap(), 1.0);
    }

    #[test]
    fn zero_extends_to_zero() {
        let b = shifts(&[0.3, 1.1, 1.7]);
        let zero = PiecewiseLinear::constant(0.0, 1.7, 0.0).unwrap();
        let sol = extend(&zero, &b, (-4.0, 9.0)).unwrap();
        assert!(sol.pieces().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_bad_boundary() {
        let b = shifts(&[1.0, 2.0]);
        let bumped = PiecewiseLinear::new(vec![0.0, 1.0, 2.0], vec![1.1, 1.0, -2.0]).unwrap();
        assert!(matches!(
            extend(&bumped, &b, (0.0, 3.0)),
            Err(Error::InterpolationViolated { .. })
        ));
        let g = tent_boundary(&b);
        assert!(matches!(
            extend(&g, &b, (0.5, 3.0)),
            Err(Error::InvalidTarget(..))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let b = shifts(&[1.0, 2.0]);
        let options = ExtensionOptions {
            breakpoint_budget: 20,
            ..Default::default()
        };
        assert!(matches!(
            extend_with(&tent_boundary(&b), &b, (-100.0, 100.0), options),
            Err(Error::CoverageBudgetExceeded(20))
        ));
    }

    #[test]
    fn grows_incrementally() {
        let b = shifts(&[0.4, 1.0]);
        let g = tent_boundary(&b);
        let mut sol = extend(&g, &b, (0.0, 1.0)).unwrap();
        assert_eq!(sol.covered(), (0.0, 1.0));
        sol.extend_to(-2.0, 5.0).unwrap();
        let once = extend(&g, &b, (-2.0, 5.0)).unwrap();
        assert_eq!(sol.pieces(), once.pieces());
    }

    #[test]
    fn residual_harnesses() {
        let cos = |w: f64| (std::f64::consts::PI * w).cos();
        let grid: Vec<f64> = (0..100).map(|i| -3.0 + 0.07 * i as f64).collect();
        assert!(residual_additive(&cos, &[1.0], &grid).unwrap() <= 1e-15);
        let one = |_: f64| 1.0;
        assert_eq!(residual_additive(&one, &[1.0, 2.0], &grid).unwrap(), 3.0);

        let a = CoefficientVector::new(vec![2.0, 3.0]).unwrap();
        let xs = [0.5, 1.0, 7.0];
        assert_eq!(residual_multiplicative(&one, &a, &xs).unwrap(), 3.0);
        let zero = |_: f64| 0.0;
        assert_eq!(residual_multiplicative(&zero, &a, &xs).unwrap(), 0.0);
        assert_eq!(
            residual_multiplicative(&one, &a, &[1.0, -1.0]),
            Err(Error::NonPositiveSample(-1.0))
        );
    }
}
