use thiserror::Error;

/// Errors produced by the solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coefficient vector is empty")]
    EmptyInput,
    #[error("coefficient {0} equals 1")]
    UnitEntry(f64),
    #[error("coefficient {0} appears more than once")]
    DuplicateEntry(f64),
    #[error("coefficient {0} is not a positive finite number")]
    NonPositiveEntry(f64),
    #[error("shifts must be finite, positive and strictly increasing")]
    InvalidShifts,
    #[error("regularity search exceeded its stopping bound {0}")]
    RegularityNotFound(f64),

    #[error("invalid piecewise-linear data: {0}")]
    InvalidPiecewise(String),
    #[error("domain [{found_lo}, {found_hi}] does not match expected [{expected_lo}, {expected_hi}]")]
    DomainMismatch {
        expected_lo: f64,
        expected_hi: f64,
        found_lo: f64,
        found_hi: f64,
    },
    #[error("interpolation condition violated: residual {residual:e} exceeds {tol:e}")]
    InterpolationViolated { residual: f64, tol: f64 },
    #[error("degenerate extension step width {0}")]
    DegenerateStep(f64),
    #[error("point {x} lies outside the covered interval [{lo}, {hi}]")]
    OutOfCoverage { x: f64, lo: f64, hi: f64 },
    #[error("target [{0}, {1}] is not a valid interval containing the boundary interval")]
    InvalidTarget(f64, f64),
    #[error("breakpoint budget of {0} exceeded")]
    CoverageBudgetExceeded(usize),
    #[error("internal inconsistency at w = {w}: values {left} and {right} disagree")]
    InternalInconsistency { w: f64, left: f64, right: f64 },
    #[error("sample point {0} is not positive")]
    NonPositiveSample(f64),

    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("scale factor {0} is not positive")]
    NonPositiveScale(f64),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("N must be at least {min}, got {n}")]
    InvalidOrder { n: usize, min: usize },
    #[error("invalid search rectangle: {0}")]
    InvalidRectangle(String),
    #[error("a zero of G_N lies within {distance:e} of the rectangle boundary near {re} + {im}i")]
    BoundaryZero { re: f64, im: f64, distance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
