//! Construction, extension and classification of solutions of the dilation
//! equation `f(x) + f(a_1 x) + ... + f(a_N x) = 0` and of its additive form
//! `g(w) + g(w + b_1) + ... + g(w + b_N) = 0`.
//!
//! - [`coefficients`]: normalization of the factors, the bridge `b_k = ln a_k`
//!   and the regularity index `m(a)`.
//! - [`extension`]: exact piecewise-linear extension of boundary data on
//!   `[0, b_N]` to a global continuous solution, plus residual checks.
//! - [`popoviciu`]: Hankel determinants separating exponential polynomials from
//!   other solutions.
//! - [`periodicity`]: existence of continuous periodic solutions.
//! - [`expsums`]: zeros of `G_N(z) = 1 + 2^z + ... + N^z` and the solutions of
//!   `f(x) + f(2x) + ... + f(Nx) = 0` they generate.

pub mod coefficients;
pub mod error;
pub mod expsums;
pub mod extension;
pub mod periodicity;
pub mod popoviciu;
pub mod pwl;

pub use coefficients::{normalize, regularity_index, CoefficientVector, RegularityIndex, ShiftVector};
pub use error::{Error, Result};
pub use extension::{extend, tent_boundary, Evaluable, ExtendedSolution};
pub use pwl::PiecewiseLinear;

pub use num_complex::Complex64;
