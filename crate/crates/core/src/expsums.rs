//! The exponential sums `G_N(z) = 1 + 2^z + ... + N^z` and `H_N(z) = G_N(-z)`
//! (partial sums of the Riemann zeta function), their complex zeros, and the
//! solutions `x -> Re(|x|^alpha)` (for `x < 0`) of `f(x) + f(2x) + ... + f(Nx) = 0`
//! built from those zeros.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extension::Evaluable;

/// Accepted zeros satisfy `|G_N(z)|` at most this.
pub const ZERO_RESIDUAL_TOL: f64 = 1e-10;
/// Zeros closer than this are the same zero.
pub const DEDUP_DISTANCE: f64 = 1e-8;
/// A zero this close to the rectangle edge makes the winding count unreliable.
pub const BOUNDARY_CLEARANCE: f64 = 1e-6;

const NEWTON_MAX_ITER: usize = 60;
const NEWTON_STEP_TOL: f64 = 1e-13;
const MAX_GRID_REFINEMENTS: usize = 3;

/// `G_N` with `ln k` precomputed.
#[derive(Debug, Clone)]
pub struct ExpSum {
    n: usize,
    logs: Vec<f64>,
}

impl ExpSum {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOrder { n, min: 2 });
        }
        Ok(Self {
            n,
            logs: (2..=n).map(|k| (k as f64).ln()).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        self.logs
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &l| acc + (z * l).exp())
    }

    /// `(G_N(z), G_N'(z))` with `G_N'(z) = sum_{k>=2} ln k * k^z`.
    pub fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = Complex64::new(1.0, 0.0);
        let mut derivative = Complex64::new(0.0, 0.0);
        for &l in &self.logs {
            let term = (z * l).exp();
            value += term;
            derivative += term * l;
        }
        (value, derivative)
    }
}

pub fn eval_gn(n: usize, z: Complex64) -> Result<Complex64> {
    Ok(ExpSum::new(n)?.value(z))
}

/// `H_N(z) = 1 + 2^{-z} + ... + N^{-z}`.
pub fn eval_hn(n: usize, z: Complex64) -> Result<Complex64> {
    eval_gn(n, -z)
}

/// Closed rectangle in the complex plane with the resolution of the scan grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub grid_re: usize,
    pub grid_im: usize,
}

impl Default for SearchRectangle {
    /// `[-3, 2] x [0, 30]`; zeros come in conjugate pairs, so only the upper half
    /// plane is scanned.
    fn default() -> Self {
        Self {
            re_min: -3.0,
            re_max: 2.0,
            im_min: 0.0,
            im_max: 30.0,
            grid_re: 101,
            grid_im: 601,
        }
    }
}

impl SearchRectangle {
    pub fn new(re: (f64, f64), im: (f64, f64), grid_re: usize, grid_im: usize) -> Result<Self> {
        let rect = Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            grid_re,
            grid_im,
        };
        rect.validate()?;
        Ok(rect)
    }

    /// Same bounds, grid spacing chosen as close as possible to `spacing`.
    pub fn with_spacing(re: (f64, f64), im: (f64, f64), spacing: f64) -> Result<Self> {
        let count = |len: f64| ((len / spacing).ceil() as usize + 1).max(2);
        Self::new(re, im, count(re.1 - re.0), count(im.1 - im.0))
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(self.re_min < self.re_max) || !(self.im_min < self.im_max) {
            return Err(Error::InvalidRectangle(format!(
                "[{}, {}] x [{}, {}]",
                self.re_min, self.re_max, self.im_min, self.im_max
            )));
        }
        if self.grid_re < 2 || self.grid_im < 2 {
            return Err(Error::InvalidRectangle(format!(
                "grid {} x {} is too coarse",
                self.grid_re, self.grid_im
            )));
        }
        Ok(())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.re_min <= z.re && z.re <= self.re_max && self.im_min <= z.im && z.im <= self.im_max
    }

    pub fn distance_to_boundary(&self, z: Complex64) -> f64 {
        [
            z.re - self.re_min,
            self.re_max - z.re,
            z.im - self.im_min,
            self.im_max - z.im,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }

    /// Reflection in the real axis.
    pub fn conjugate(&self) -> Self {
        Self {
            im_min: -self.im_max,
            im_max: -self.im_min,
            ..*self
        }
    }

    /// Lower and upper halves in the imaginary direction.
    pub fn split_im(&self) -> (Self, Self) {
        let mid = 0.5 * (self.im_min + self.im_max);
        (
            Self {
                im_max: mid,
                ..*self
            },
            Self {
                im_min: mid,
                ..*self
            },
        )
    }

    pub fn refined(&self) -> Self {
        Self {
            grid_re: 2 * self.grid_re - 1,
            grid_im: 2 * self.grid_im - 1,
            ..*self
        }
    }

    fn node(&self, i: usize, j: usize) -> Complex64 {
        let re = self.re_min + (self.re_max - self.re_min) * i as f64 / (self.grid_re - 1) as f64;
        let im = self.im_min + (self.im_max - self.im_min) * j as f64 / (self.grid_im - 1) as f64;
        Complex64::new(re, im)
    }
}

/// A zero of `G_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexZero {
    pub z: Complex64,
    pub modulus_residual: f64,
    pub n: usize,
    /// `|G_N|` at each Newton iterate, starting from the grid seed.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroWarning {
    /// The winding count on the rectangle boundary differs from the number of
    /// zeros found even after grid refinement.
    Incomplete { winding: i64, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSearch {
    pub zeros: Vec<ComplexZero>,
    pub winding: i64,
    pub warning: Option<ZeroWarning>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub z: Complex64,
    pub converged: bool,
    pub trace: Vec<f64>,
}

/// Complex Newton iteration on `G_N`. Stops when the step is below
/// `1e-13 (1 + |z|)`, after 60 iterations, or when `|G_N|` stops decreasing
/// after reaching the acceptance level (the last improving iterate is kept).
pub fn newton_refine(g: &ExpSum, start: Complex64) -> NewtonOutcome {
    let mut z = start;
    let (mut value, mut derivative) = g.value_and_derivative(z);
    let mut trace = vec![value.norm()];
    for _ in 0..NEWTON_MAX_ITER {
        if derivative.norm() == 0.0 || !value.norm().is_finite() {
            break;
        }
        let step = value / derivative;
        let next = z - step;
        let (next_value, next_derivative) = g.value_and_derivative(next);
        let current = *trace.last().unwrap();
        if current <= ZERO_RESIDUAL_TOL && next_value.norm() >= current {
            return NewtonOutcome {
                z,
                converged: true,
                trace,
            };
        }
        z = next;
        value = next_value;
        derivative = next_derivative;
        trace.push(value.norm());
        if step.norm() <= NEWTON_STEP_TOL * (1.0 + z.norm()) {
            return NewtonOutcome {
                z,
                converged: true,
                trace,
            };
        }
    }
    NewtonOutcome {
        z,
        converged: false,
        trace,
    }
}

/// `|G_N|` on the scan grid as `(re, im, abs)` rows, real part varying fastest.
pub fn abs_grid(n: usize, rect: &SearchRectangle) -> Result<Vec<(f64, f64, f64)>> {
    rect.validate()?;
    let g = ExpSum::new(n)?;
    let mut rows = Vec::with_capacity(rect.grid_re * rect.grid_im);
    for j in 0..rect.grid_im {
        for i in 0..rect.grid_re {
            let z = rect.node(i, j);
            rows.push((z.re, z.im, g.value(z).norm()));
        }
    }
    Ok(rows)
}

fn grid_seeds(g: &ExpSum, rect: &SearchRectangle) -> Vec<Complex64> {
    let (nr, ni) = (rect.grid_re, rect.grid_im);
    let values: Vec<f64> = (0..ni)
        .flat_map(|j| (0..nr).map(move |i| (i, j)))
        .map(|(i, j)| g.value(rect.node(i, j)).norm())
        .collect();
    let at = |i: usize, j: usize| values[j * nr + i];
    let mut seeds = Vec::new();
    for j in 0..ni {
        for i in 0..nr {
            let v = at(i, j);
            let mut is_min = true;
            'nbr: for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii >= nr as i64 || jj >= ni as i64 {
                        continue;
                    }
                    if at(ii as usize, jj as usize) < v {
                        is_min = false;
                        break 'nbr;
                    }
                }
            }
            if is_min {
                seeds.push(rect.node(i, j));
            }
        }
    }
    seeds
}

fn collect_zeros(g: &ExpSum, rect: &SearchRectangle) -> Vec<ComplexZero> {
    let mut zeros: Vec<ComplexZero> = Vec::new();
    for seed in grid_seeds(g, rect) {
        let outcome = newton_refine(g, seed);
        if !outcome.converged || !rect.contains(outcome.z) {
            continue;
        }
        let residual = g.value(outcome.z).norm();
        if !(residual <= ZERO_RESIDUAL_TOL) || outcome.z.im.abs() <= 1e-6 {
            continue;
        }
        match zeros
            .iter_mut()
            .find(|known| (known.z - outcome.z).norm() < DEDUP_DISTANCE)
        {
            Some(known) => {
                if residual < known.modulus_residual {
                    known.z = outcome.z;
                    known.modulus_residual = residual;
                    known.trace = outcome.trace;
                }
            }
            None => zeros.push(ComplexZero {
                z: outcome.z,
                modulus_residual: residual,
                n: g.order(),
                trace: outcome.trace,
            }),
        }
    }
    zeros.sort_by(|a, b| a.z.im.total_cmp(&b.z.im).then(a.z.re.total_cmp(&b.z.re)));
    zeros
}

/// Zeros of `G_N` inside the rectangle, audited against the winding count of
/// `G_N` along its boundary. The scan grid is refined up to three times while
/// the two disagree; a remaining mismatch is reported as a warning.
pub fn find_zeros(n: usize, rect: &SearchRectangle) -> Result<ZeroSearch> {
    rect.validate()?;
    let g = ExpSum::new(n)?;
    let winding = winding_count_with(&g, rect)?;
    let mut grid = *rect;
    let mut zeros = collect_zeros(&g, &grid);
    for _ in 0..MAX_GRID_REFINEMENTS {
        if zeros.len() as i64 == winding {
            break;
        }
        grid = grid.refined();
        zeros = collect_zeros(&g, &grid);
    }
    if let Some(z) = zeros
        .iter()
        .find(|z| rect.distance_to_boundary(z.z) < BOUNDARY_CLEARANCE)
    {
        return Err(Error::BoundaryZero {
            re: z.z.re,
            im: z.z.im,
            distance: rect.distance_to_boundary(z.z),
        });
    }
    let warning = (zeros.len() as i64 != winding).then_some(ZeroWarning::Incomplete {
        winding,
        found: zeros.len(),
    });
    Ok(ZeroSearch {
        zeros,
        winding,
        warning,
    })
}

/// Number of zeros of `G_N` inside the rectangle by the argument principle: the
/// change of `arg G_N` along the counterclockwise boundary, divided by `2 pi`.
/// Each edge is subdivided adaptively until consecutive samples turn by less
/// than `pi/4` and halving the segment does not change the increment.
pub fn winding_count(n: usize, rect: &SearchRectangle) -> Result<i64> {
    rect.validate()?;
    winding_count_with(&ExpSum::new(n)?, rect)
}

fn winding_count_with(g: &ExpSum, rect: &SearchRectangle) -> Result<i64> {
    let corners = [
        Complex64::new(rect.re_min, rect.im_min),
        Complex64::new(rect.re_max, rect.im_min),
        Complex64::new(rect.re_max, rect.im_max),
        Complex64::new(rect.re_min, rect.im_max),
    ];
    let mut total = 0.0;
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        let pieces = (((b - a).norm() / 0.05).ceil() as usize).max(64);
        let mut z0 = a;
        let mut g0 = checked_value(g, z0)?;
        for s in 1..=pieces {
            let z1 = a + (b - a) * (s as f64 / pieces as f64);
            let g1 = checked_value(g, z1)?;
            total += arg_change(g, z0, g0, z1, g1, 0)?;
            z0 = z1;
            g0 = g1;
        }
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-3 {
        return Err(Error::BoundaryZero {
            re: f64::NAN,
            im: f64::NAN,
            distance: 0.0,
        });
    }
    Ok(rounded as i64)
}

fn checked_value(g: &ExpSum, z: Complex64) -> Result<Complex64> {
    let v = g.value(z);
    if v.norm() < 1e-12 {
        return Err(Error::BoundaryZero {
            re: z.re,
            im: z.im,
            distance: 0.0,
        });
    }
    Ok(v)
}

fn arg_change(
    g: &ExpSum,
    z0: Complex64,
    g0: Complex64,
    z1: Complex64,
    g1: Complex64,
    depth: usize,
) -> Result<f64> {
    let whole = (g1 / g0).arg();
    let zm = (z0 + z1) * 0.5;
    let gm = checked_value(g, zm)?;
    let left = (gm / g0).arg();
    let right = (g1 / gm).arg();
    if left.abs() < PI / 4.0 && right.abs() < PI / 4.0 && (left + right - whole).abs() < 1e-9 {
        return Ok(left + right);
    }
    if depth >= 40 {
        return Err(Error::BoundaryZero {
            re: zm.re,
            im: zm.im,
            distance: (z1 - z0).norm(),
        });
    }
    Ok(arg_change(g, z0, g0, zm, gm, depth + 1)? + arg_change(g, zm, gm, z1, g1, depth + 1)?)
}

/// `x -> Re(|x|^alpha)` for `x < 0` and `0` for `x >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoraSolution {
    pub alpha: Complex64,
    /// Only exponents with positive real part give a function continuous at 0.
    pub continuous_at_zero: bool,
}

impl MoraSolution {
    pub fn new(alpha: Complex64) -> Self {
        Self {
            alpha,
            continuous_at_zero: alpha.re > 0.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x >= 0.0 {
            return 0.0;
        }
        let l = (-x).ln();
        (l * self.alpha.re).exp() * (l * self.alpha.im).cos()
    }
}

impl Evaluable for MoraSolution {
    fn try_eval(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x))
    }
}

/// Solution of `f(x) + f(2x) + ... + f(Nx) = 0` attached to a zero of `G_N`.
pub fn mora_solution(zero: &ComplexZero) -> MoraSolution {
    MoraSolution::new(zero.z)
}

/// Largest `|f(x) + f(2x) + ... + f(Nx)|` over the grid.
pub fn residual_integer_equation<F: Evaluable + ?Sized>(f: &F, n: usize, grid: &[f64]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &x in grid {
        let mut sum = 0.0;
        for k in 1..=n {
            sum += f.try_eval(k as f64 * x)?;
        }
        worst = worst.max(sum.abs());
    }
    Ok(worst)
}
