use std::fmt;

use dilation_core::Error;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_NONCONVERGENCE: u8 = 4;

/// A failed run: the exit code and the message printed on stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            kind: "InvalidInput".into(),
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            kind: "DomainViolation".into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.kind, self.message)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InterpolationViolated { .. }
        | Error::OutOfCoverage { .. }
        | Error::CoverageBudgetExceeded(_)
        | Error::NonPositiveSample(_)
        | Error::DegenerateStep(_)
        | Error::BoundaryZero { .. } => EXIT_DOMAIN,
        Error::RegularityNotFound(_) | Error::InternalInconsistency { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_VALIDATION,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        // the variant name, so scripts can match on it
        let debug = format!("{e:?}");
        let kind = debug
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or("Error")
            .to_string();
        Self {
            code: exit_code(&e),
            kind,
            message: e.to_string(),
        }
    }
}
