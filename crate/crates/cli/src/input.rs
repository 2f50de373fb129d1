use std::fs;
use std::path::Path;

use dilation_core::{CoefficientVector, PiecewiseLinear, ShiftVector};
use serde_json::Value;

use crate::failure::Failure;

/// Inline JSON when the argument starts with `open`, otherwise a file path.
fn inline_or_file(arg: &str, open: char) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with(open) {
        return Ok(trimmed.to_string());
    }
    fs::read_to_string(arg).map_err(|e| Failure::validation(format!("cannot read {arg}: {e}")))
}

fn numbers(value: &Value, what: &str) -> Result<Vec<f64>, Failure> {
    let items = value
        .as_array()
        .ok_or_else(|| Failure::validation(format!("{what} must be a JSON array of numbers")))?;
    items
        .iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| Failure::validation(format!("{what}: {v} is not a number")))
        })
        .collect()
}

fn parse_json(text: &str, what: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::validation(format!("{what}: {e}")))
}

/// Raw coefficient list, before any validation.
pub fn raw_coefficients(arg: &str) -> Result<Vec<f64>, Failure> {
    let text = inline_or_file(arg, '[')?;
    numbers(&parse_json(&text, "coefficients")?, "coefficients")
}

pub fn coefficients(arg: &str) -> Result<CoefficientVector, Failure> {
    Ok(CoefficientVector::new(raw_coefficients(arg)?)?)
}

/// Comma-separated list, or a JSON array.
pub fn list(arg: &str, what: &str) -> Result<Vec<f64>, Failure> {
    let trimmed = arg.trim();
    if trimmed.starts_with('[') {
        return numbers(&parse_json(trimmed, what)?, what);
    }
    trimmed
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::validation(format!("{what}: cannot parse {s:?}")))
        })
        .collect()
}

pub fn shifts(arg: &str) -> Result<ShiftVector, Failure> {
    Ok(ShiftVector::new(list(arg, "shifts")?)?)
}

/// Finite positive shifts; repeats allowed.
pub fn loose_shifts(arg: &str) -> Result<Vec<f64>, Failure> {
    let b = list(arg, "shifts")?;
    if b.is_empty() || b.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Failure::validation("shifts must be finite and positive"));
    }
    Ok(b)
}

pub fn pair(arg: &str, what: &str) -> Result<(f64, f64), Failure> {
    match list(arg, what)?[..] {
        [a, b] if a.is_finite() && b.is_finite() && a < b => Ok((a, b)),
        _ => Err(Failure::validation(format!(
            "{what} must be two increasing finite numbers, got {arg:?}"
        ))),
    }
}

pub fn boundary(arg: &str) -> Result<PiecewiseLinear, Failure> {
    let value = parse_json(&inline_or_file(arg, '{')?, "boundary")?;
    let field = |key: &str| {
        value
            .get(key)
            .ok_or_else(|| Failure::validation(format!("boundary is missing {key:?}")))
            .and_then(|v| numbers(v, key))
    };
    Ok(PiecewiseLinear::new(field("breakpoints")?, field("values")?)?)
}

/// Two-column CSV with a header line, as written by `extend`.
pub fn samples(path: &Path) -> Result<PiecewiseLinear, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let parsed = match cells[..] {
            [x, y] => x.trim().parse::<f64>().ok().zip(y.trim().parse::<f64>().ok()),
            _ => None,
        };
        let (x, y) = parsed
            .ok_or_else(|| Failure::validation(format!("{}: bad row {}", path.display(), i + 1)))?;
        xs.push(x);
        ys.push(y);
    }
    Ok(PiecewiseLinear::from_samples(&xs, &ys)?)
}
