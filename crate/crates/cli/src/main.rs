//! `dilation`: shell access to the solvers in `dilation-core`.
//!
//! JSON goes to `--out` (or stdout), diagnostics to stderr. Exit codes: 0 ok,
//! 2 invalid input, 3 domain violation, 4 numerical non-convergence.

mod failure;
mod input;
mod output;

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dilation_core::expsums::{
    abs_grid, find_zeros, mora_solution, residual_integer_equation, SearchRectangle, ZeroWarning,
};
use dilation_core::extension::{
    extend_with, residual_additive, residual_multiplicative, tent_boundary, ExtendedSolution,
    ExtensionOptions,
};
use dilation_core::periodicity::{
    default_grid_step, equispaced_alphas, fourier_matrix, scan_periodicity,
    two_term_periodic_exists, PeriodicityCertificate, DEFAULT_RESIDUAL_TOL,
};
use dilation_core::popoviciu::popoviciu_determinant;
use dilation_core::{normalize, regularity_index, Evaluable, ShiftVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use failure::{Failure, EXIT_NONCONVERGENCE};
use output::{csv, num_array, Json};

const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Parser, Debug)]
#[command(name = "dilation", version, about = "Solve and audit dilation equations f(x) + f(a_1 x) + ... + f(a_N x) = 0")]
struct Cli {
    /// Tolerance: interpolation check for extensions, acceptance residual for periodicity
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomly placed check points
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the main output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct BoundaryArgs {
    /// Shifts b_1 < ... < b_N, comma separated
    #[arg(long)]
    shifts: String,
    /// Boundary data on [0, b_N]: file or inline {"breakpoints": [...], "values": [...]}
    #[arg(long, required_unless_present = "tent", conflicts_with = "tent")]
    boundary: Option<String>,
    /// Use the built-in tent boundary data instead
    #[arg(long)]
    tent: bool,
}

#[derive(Args, Debug)]
struct RectArgs {
    /// Real range of the search rectangle
    #[arg(long, default_value = "-3,2", allow_hyphen_values = true)]
    re: String,
    /// Imaginary range of the search rectangle
    #[arg(long, default_value = "0,30", allow_hyphen_values = true)]
    im: String,
    #[arg(long, default_value_t = 101)]
    grid_re: usize,
    #[arg(long, default_value_t = 601)]
    grid_im: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regularity index of a coefficient vector (JSON array, inline or file)
    Regularity { coeffs: String },
    /// Sort and rescale raw factors into a coefficient vector
    Normalize { coeffs: String },
    /// Extend boundary data and sample the solution as CSV
    Extend {
        #[command(flatten)]
        data: BoundaryArgs,
        /// Sampling range lo,hi
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Number of equal subintervals; samples + 1 rows are written
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Equation residual of a sampled function (CSV with a header line)
    Residual {
        file: PathBuf,
        /// Additive form with these shifts
        #[arg(long, required_unless_present = "coeffs", conflicts_with = "coeffs")]
        shifts: Option<String>,
        /// Multiplicative form with these coefficients
        #[arg(long)]
        coeffs: Option<String>,
        /// Check at this many random points instead of the sample points
        #[arg(long)]
        random: Option<usize>,
    },
    /// Frequencies alpha in (0, alpha_max] carrying periodic solutions
    Periodicity {
        /// Positive shifts, comma separated; repeats allowed
        #[arg(long)]
        shifts: String,
        #[arg(long)]
        alpha_max: f64,
        #[arg(long)]
        grid_step: Option<f64>,
    },
    /// Closed-form frequencies for shifts (d, 2d, ..., N d)
    Equispaced {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        m_max: u32,
    },
    /// Periodic solutions of g(x) + g(x + a) + g(x + b) = 0 with a/b = p/q
    TwoTerm { p: u64, q: u64 },
    /// The 2x2 Fourier system at frequency k theta
    FourierMatrix {
        #[arg(long)]
        shifts: String,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Zeros of G_N(z) = 1 + 2^z + ... + N^z in a rectangle
    Zeros {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rect: RectArgs,
        /// Also write |G_N| on the scan grid as CSV
        #[arg(long)]
        abs_grid: Option<PathBuf>,
    },
    /// Sample the solution of f(x) + f(2x) + ... + f(Nx) = 0 built from a zero of G_N
    MoraSolution {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rect: RectArgs,
        /// Which zero, counted in order of increasing imaginary part
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value = "-5,-0.01", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Hankel determinant of f(x + (i + j) h), i, j = 0..=order
    Popoviciu {
        #[arg(long, required_unless_present = "cos")]
        shifts: Option<String>,
        #[arg(long, conflicts_with = "cos")]
        boundary: Option<String>,
        #[arg(long, conflicts_with_all = ["cos", "boundary"])]
        tent: bool,
        /// Use cos(pi w / HALF_PERIOD) instead of an extension
        #[arg(long, value_name = "HALF_PERIOD")]
        cos: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
}

/// Everything a successful run writes, assembled before anything is written.
struct Report {
    body: String,
    files: Vec<(PathBuf, String)>,
    notes: Vec<String>,
    code: u8,
}

impl Report {
    fn new(body: String) -> Self {
        Self {
            body,
            files: Vec::new(),
            notes: Vec::new(),
            code: 0,
        }
    }
}

fn certificate_json(c: &PeriodicityCertificate) -> Json {
    Json::Obj(vec![
        ("alpha", Json::Num(c.alpha)),
        ("period", Json::Num(c.period)),
        ("residual", Json::Num(c.system_residual)),
    ])
}

/// `samples + 1` equally spaced points from `lo` to `hi`, endpoints exact.
fn sample_points(lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>, Failure> {
    if samples == 0 {
        return Err(Failure::validation("samples must be at least 1"));
    }
    let n = samples as f64;
    Ok((0..=samples)
        .map(|i| {
            let t = i as f64;
            (lo * (n - t) + hi * t) / n
        })
        .collect())
}

fn boundary_data(b: &ShiftVector, boundary: Option<&str>) -> Result<dilation_core::PiecewiseLinear, Failure> {
    match boundary {
        Some(arg) => input::boundary(arg),
        None => Ok(tent_boundary(b)),
    }
}

fn extension(
    b: &ShiftVector,
    boundary: Option<&str>,
    lo: f64,
    hi: f64,
    tol: Option<f64>,
) -> Result<ExtendedSolution, Failure> {
    let g = boundary_data(b, boundary)?;
    let mut options = ExtensionOptions::default();
    if let Some(t) = tol {
        options.interpolation_tol = t;
    }
    Ok(extend_with(&g, b, (lo.min(0.0), hi.max(b.last())), options)?)
}

fn rectangle(args: &RectArgs) -> Result<SearchRectangle, Failure> {
    let re = input::pair(&args.re, "re")?;
    let im = input::pair(&args.im, "im")?;
    Ok(SearchRectangle::new(re, im, args.grid_re, args.grid_im)?)
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::validation(format!("--tol must be positive, got {t}")));
        }
    }
    match &cli.command {
        Command::Regularity { coeffs } => {
            let r = regularity_index(&input::coefficients(coeffs)?)?;
            Ok(Report::new(
                Json::Obj(vec![
                    ("m", Json::Int(i64::from(r.m))),
                    ("contraction", Json::Num(r.contraction)),
                    ("lower_bound", Json::Num(r.lower_bound)),
                    ("upper_bound", Json::Num(r.upper_bound)),
                ])
                .render(),
            ))
        }
        Command::Normalize { coeffs } => {
            let a = normalize(&input::raw_coefficients(coeffs)?)?;
            Ok(Report::new(num_array(a.entries()).render()))
        }
        Command::Extend { data, range, samples } => {
            let b = input::shifts(&data.shifts)?;
            let (lo, hi) = input::pair(range, "range")?;
            let ws = sample_points(lo, hi, *samples)?;
            // cover w + b_N for every sample so the residual is defined on all of them
            let sol = extension(&b, data.boundary.as_deref(), lo, hi + b.last(), cli.tol)?;
            let values = ws.iter().map(|&w| sol.evaluate(w)).collect::<Result<Vec<_>, _>>()?;
            let residual = residual_additive(&sol, b.entries(), &ws)?;
            let mut report = Report::new(csv(&["w", "value"], ws.iter().zip(values).map(|(&w, v)| vec![w, v])));
            report.notes.push(format!("interpolation residual {:e}", sol.boundary_residual()));
            report.notes.push(format!("max equation residual on samples {residual:e}"));
            Ok(report)
        }
        Command::Residual { file, shifts, coeffs, random } => {
            let f = input::samples(file)?;
            let (lo, hi) = f.domain();
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let pick = |rng: &mut ChaCha8Rng, a: f64, b: f64, keep: &dyn Fn(f64) -> bool| -> Result<Vec<f64>, Failure> {
                if !(a < b) {
                    return Err(Failure::domain("samples do not cover a single full equation"));
                }
                Ok(match random {
                    Some(k) => (0..*k).map(|_| rng.gen_range(a..=b)).collect(),
                    None => f.breakpoints().iter().copied().filter(|&x| keep(x)).collect(),
                })
            };
            let (residual, points) = if let Some(s) = shifts {
                let b = input::shifts(s)?;
                let (a, top) = (lo, hi - b.last());
                let grid = pick(&mut rng, a, top, &|w| w <= top)?;
                (residual_additive(&f, b.entries(), &grid)?, grid.len())
            } else {
                let a = input::coefficients(coeffs.as_deref().expect("clap requires one of the two"))?;
                let (bottom, top) = (lo.max(0.0), hi / a.last());
                let grid = pick(&mut rng, bottom, top, &|x| x > 0.0 && x >= lo && x <= top)?;
                let grid: Vec<f64> = grid.into_iter().filter(|&x| x > 0.0).collect();
                (residual_multiplicative(&f, &a, &grid)?, grid.len())
            };
            let mut fields = vec![("residual", Json::Num(residual)), ("points", Json::Int(points as i64))];
            if let Some(t) = cli.tol {
                fields.push(("within_tol", Json::Bool(residual <= t)));
            }
            Ok(Report::new(Json::Obj(fields).render()))
        }
        Command::Periodicity { shifts, alpha_max, grid_step } => {
            let b = input::loose_shifts(shifts)?;
            let step = grid_step.unwrap_or_else(|| default_grid_step(&b, *alpha_max));
            let scan = scan_periodicity(&b, *alpha_max, step, cli.tol.unwrap_or(DEFAULT_RESIDUAL_TOL))?;
            let mut report = Report::new(Json::Arr(scan.certificates.iter().map(certificate_json).collect()).render());
            report.notes.push(format!(
                "smallest residual {:e} at alpha {}",
                scan.min_residual, scan.min_alpha
            ));
            Ok(report)
        }
        Command::Equispaced { n, d, m_max } => {
            let b: Vec<f64> = (1..=*n).map(|k| k as f64 * d).collect();
            let certs: Vec<Json> = equispaced_alphas(*n, *d, *m_max)?
                .into_iter()
                .map(|alpha| certificate_json(&PeriodicityCertificate::new(alpha, &b)))
                .collect();
            Ok(Report::new(Json::Arr(certs).render()))
        }
        Command::TwoTerm { p, q } => {
            let verdict = two_term_periodic_exists(*p, *q)?;
            let witness = match verdict.witness() {
                Some((k, m)) => Json::Arr(vec![Json::Int(k), Json::Int(m)]),
                None => Json::Null,
            };
            Ok(Report::new(
                Json::Obj(vec![("exists", Json::Bool(verdict.exists())), ("witness", witness)]).render(),
            ))
        }
        Command::FourierMatrix { shifts, theta, k } => {
            let b = input::loose_shifts(shifts)?;
            if !theta.is_finite() {
                return Err(Failure::validation("theta must be finite"));
            }
            let m = fourier_matrix(*k, *theta, &b);
            let rows = Json::Arr(m.entries.iter().map(|r| num_array(r)).collect());
            Ok(Report::new(
                Json::Obj(vec![
                    ("k", Json::Int(i64::from(*k))),
                    ("theta", Json::Num(*theta)),
                    ("matrix", rows),
                    ("determinant", Json::Num(m.determinant())),
                    ("max_abs_entry", Json::Num(m.max_abs_entry())),
                ])
                .render(),
            ))
        }
        Command::Zeros { n, rect, abs_grid: grid_path } => {
            let rect = rectangle(rect)?;
            let search = find_zeros(*n, &rect)?;
            let zeros: Vec<Json> = search
                .zeros
                .iter()
                .map(|z| {
                    Json::Obj(vec![
                        ("re", Json::Num(z.z.re)),
                        ("im", Json::Num(z.z.im)),
                        ("residual", Json::Num(z.modulus_residual)),
                        ("N", Json::Int(z.n as i64)),
                    ])
                })
                .collect();
            let mut report = Report::new(Json::Arr(zeros).render());
            if let Some(path) = grid_path {
                let rows = abs_grid(*n, &rect)?.into_iter().map(|(re, im, a)| vec![re, im, a]);
                report.files.push((path.clone(), csv(&["re", "im", "abs"], rows)));
            }
            report
                .notes
                .push(format!("winding count {}, zeros found {}", search.winding, search.zeros.len()));
            if let Some(ZeroWarning::Incomplete { winding, found }) = search.warning {
                report.notes.push(format!(
                    "warning: {found} zeros found but the winding count is {winding}"
                ));
                report.code = EXIT_NONCONVERGENCE;
            }
            Ok(report)
        }
        Command::MoraSolution { n, rect, index, range, samples } => {
            let rect = rectangle(rect)?;
            let (lo, hi) = input::pair(range, "range")?;
            let xs = sample_points(lo, hi, *samples)?;
            let search = find_zeros(*n, &rect)?;
            let zero = search.zeros.get(*index).ok_or_else(|| {
                Failure::validation(format!(
                    "zero index {index} requested but only {} zeros were found",
                    search.zeros.len()
                ))
            })?;
            let f = mora_solution(zero);
            let residual = residual_integer_equation(&f, *n, &xs)?;
            let mut report = Report::new(csv(&["x", "value"], xs.iter().map(|&x| vec![x, f.eval(x)])));
            report.notes.push(format!("alpha {} + {}i", f.alpha.re, f.alpha.im));
            report.notes.push(format!("max equation residual on samples {residual:e}"));
            Ok(report)
        }
        Command::Popoviciu { shifts, boundary, tent: _, cos, x, h, order } => {
            if !x.is_finite() {
                return Err(Failure::validation("x must be finite"));
            }
            let det = match cos {
                Some(half) => {
                    if !(*half > 0.0 && half.is_finite()) {
                        return Err(Failure::validation("cos half period must be positive"));
                    }
                    let half = *half;
                    popoviciu_determinant(&move |w: f64| (PI * w / half).cos(), *x, *h, *order)?
                }
                None => {
                    let b = input::shifts(shifts.as_deref().expect("clap requires shifts"))?;
                    let end = x + 2.0 * (*order as f64) * h;
                    let sol = extension(&b, boundary.as_deref(), x.min(end), x.max(end), cli.tol)?;
                    popoviciu_determinant(&sol as &dyn Evaluable, *x, *h, *order)?
                }
            };
            Ok(Report::new(
                Json::Obj(vec![
                    ("x", Json::Num(*x)),
                    ("h", Json::Num(*h)),
                    ("order", Json::Int(*order as i64)),
                    ("determinant", Json::Num(det)),
                ])
                .render(),
            ))
        }
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("{f}");
            return ExitCode::from(f.code);
        }
    };
    let written = report
        .files
        .iter()
        .try_for_each(|(path, text)| write(path, text))
        .and_then(|()| match &cli.out {
            Some(path) => write(path, &report.body),
            None => {
                print!("{}", report.body);
                Ok(())
            }
        });
    if let Err(f) = written {
        eprintln!("{f}");
        return ExitCode::from(f.code);
    }
    for note in &report.notes {
        eprintln!("{note}");
    }
    ExitCode::from(report.code)
}
