use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use cpld_core::ball_spectrum::{curve_points, lowest_eigenvalue};
use cpld_core::constants::{c_constant, sweep, sweep_grid, ConstantRecord, DEFAULT_SWEEP_STEPS};
use cpld_core::fd_oracle::{fd_extrapolated, fd_lowest_eigenvalue, FdProblem, RadialDensity};
use cpld_core::io::{fmt_f64, write_constants, write_curve, write_profile};
use cpld_core::jab::{minimize_jab, solve_jab, MinimizeOptions, ProfileSample, DEFAULT_GRID_POINTS};
use cpld_core::kummer::{set_precision, Precision};
use cpld_core::{Error, Execution};

const EXIT_INVALID: u8 = 2;
const EXIT_SOLVER: u8 = 3;

/// Clamped-plate eigenvalues and lower-bound constants in anti-Gauss space.
///
/// Everything is deterministic; there is no random seed. Set CPLD_PRECISION
/// to `double` or `extended` to force the series working precision.
#[derive(Debug, Parser)]
#[command(name = "cpld", version)]
struct Cli {
    /// Output format; defaults to JSON for single points and CSV for tables.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Evaluate grid points on all cores.
    #[arg(long, global = true)]
    parallel: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Weight {
    AntiGauss,
    Flat,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lowest clamped eigenvalue of order l on the ball B_R.
    Eig {
        #[arg(long)]
        n: u32,
        #[arg(long = "R")]
        r: f64,
        #[arg(long, default_value_t = 0)]
        l: u32,
    },
    /// Lowest frequency against R for one or more orders.
    Curve {
        #[arg(long)]
        n: u32,
        /// Comma-separated orders.
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        l: Vec<u32>,
        #[arg(long, default_value_t = 0.1)]
        r_min: f64,
        #[arg(long, default_value_t = 2.0)]
        r_max: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-ball value J_{A,B}.
    Jab {
        #[arg(long)]
        n: u32,
        #[arg(long = "A")]
        a: f64,
        #[arg(long = "B")]
        b: f64,
    },
    /// Minimum of J_{A,B} over mass-preserving splits of B_R.
    Minjab {
        #[arg(long)]
        n: u32,
        #[arg(long = "R")]
        r: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        /// Write the sqrt(J) profile along the A grid to this CSV file.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// The constant C(R, n).
    Const {
        #[arg(long)]
        n: u32,
        #[arg(long = "R")]
        r: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
    },
    /// C(R, n) over a grid of radii for several dimensions.
    Sweep {
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        n: Vec<u32>,
        #[arg(long, default_value_t = 0.05)]
        r_min: f64,
        #[arg(long, default_value_t = 3.0)]
        r_max: f64,
        #[arg(long, default_value_t = DEFAULT_SWEEP_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-difference eigenvalue of the radial problem.
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long = "R")]
        r: f64,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 4000)]
        mesh: usize,
        #[arg(long, value_enum, default_value_t = Weight::AntiGauss)]
        weight: Weight,
        /// Richardson-extrapolate against the mesh with half the step.
        #[arg(long)]
        extrapolate: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Solver(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver error: {msg}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if let Ok(p) = std::env::var("CPLD_PRECISION") {
        let prec: Precision = p.parse()?;
        if prec == Precision::Auto {
            return Err(Failure::Invalid("CPLD_PRECISION must be double or extended".into()));
        }
        set_precision(prec);
    }
    let exec = Execution::from_flag(cli.parallel);
    let point_format = cli.format.unwrap_or(Format::Json);
    let table_format = cli.format.unwrap_or(Format::Csv);

    match cli.command {
        Command::Eig { n, r, l } => {
            let m = lowest_eigenvalue(n, l, r)?;
            let mut rec = Map::new();
            rec.insert("n".into(), n.into());
            rec.insert("R".into(), r.into());
            rec.insert("l".into(), l.into());
            rec.insert("lambda".into(), m.lambda.into());
            rec.insert("Lambda".into(), m.eigenvalue.into());
            rec.insert("G_R".into(), m.g_r.into());
            emit_point(&rec, point_format)
        }
        Command::Curve { n, l, r_min, r_max, steps, out } => {
            let grid = sweep_grid(r_min, r_max, steps)?;
            let points = curve_points(n, &l, &grid, exec)?;
            match table_format {
                Format::Csv => with_output(out.as_deref(), |w| write_curve(w, &points)),
                Format::Json => {
                    let rows = points
                        .iter()
                        .map(|p| {
                            let mut rec = Map::new();
                            rec.insert("R".into(), p.radius.into());
                            rec.insert("l".into(), p.l.into());
                            let (v, status) = split_result(&p.lambda);
                            rec.insert("lambda".into(), v);
                            rec.insert("status".into(), status.into());
                            Value::Object(rec)
                        })
                        .collect();
                    with_output(out.as_deref(), |w| write_json(w, &Value::Array(rows)))
                }
            }
        }
        Command::Jab { n, a, b } => {
            let s = solve_jab(n, a, b)?;
            let mut rec = Map::new();
            rec.insert("n".into(), n.into());
            rec.insert("A".into(), a.into());
            rec.insert("B".into(), b.into());
            rec.insert("sqrtJ".into(), s.lambda.into());
            rec.insert("J".into(), s.mu.into());
            emit_point(&rec, point_format)
        }
        Command::Minjab { n, r, grid_points, profile } => {
            let opts = MinimizeOptions { grid_points, exec, ..Default::default() };
            let min = minimize_jab(n, r, &opts)?;
            if let Some(path) = profile {
                let samples: Vec<ProfileSample> = min
                    .profile
                    .iter()
                    .map(|p| ProfileSample { a: p.a, b: p.b, lambda: Ok(p.sqrt_j) })
                    .collect();
                with_output(Some(&path), |w| write_profile(w, &samples))?;
            }
            let mut rec = Map::new();
            rec.insert("n".into(), n.into());
            rec.insert("R".into(), r.into());
            rec.insert("A_star".into(), min.a_star.into());
            rec.insert("A_min".into(), min.a_min.into());
            rec.insert("B_min".into(), min.b_min.into());
            rec.insert("J_min".into(), min.j_min.into());
            emit_point(&rec, point_format)
        }
        Command::Const { n, r, grid_points } => {
            let opts = MinimizeOptions { grid_points, exec, ..Default::default() };
            let rec = c_constant(n, r, &opts)?;
            match point_format {
                Format::Csv => with_output(None, |w| write_constants(w, &[rec])),
                Format::Json => emit_point(&constant_json(&rec), Format::Json),
            }
        }
        Command::Sweep { n, r_min, r_max, steps, grid_points, out } => {
            let opts = MinimizeOptions { grid_points, exec, ..Default::default() };
            let rows = sweep(&n, r_min, r_max, steps, &opts)?;
            match table_format {
                Format::Csv => with_output(out.as_deref(), |w| write_constants(w, &rows)),
                Format::Json => {
                    let arr = rows.iter().map(|r| Value::Object(constant_json(r))).collect();
                    with_output(out.as_deref(), |w| write_json(w, &Value::Array(arr)))
                }
            }
        }
        Command::Oracle { n, r, l, mesh, weight, extrapolate } => {
            let density = match weight {
                Weight::AntiGauss => RadialDensity::anti_gaussian(),
                Weight::Flat => RadialDensity::flat(),
            };
            let problem = FdProblem::new(n, l, r, mesh, density)?;
            let fd = if extrapolate {
                fd_extrapolated(&problem)?
            } else {
                fd_lowest_eigenvalue(&problem)?
            };
            let mut rec = Map::new();
            rec.insert("n".into(), n.into());
            rec.insert("R".into(), r.into());
            rec.insert("l".into(), l.into());
            rec.insert("mesh".into(), mesh.into());
            rec.insert("Lambda_fd".into(), fd.into());
            if weight == Weight::AntiGauss {
                let exact = lowest_eigenvalue(n, l, r)?.eigenvalue;
                rec.insert("Lambda".into(), exact.into());
                rec.insert("rel_diff".into(), ((fd - exact).abs() / exact).into());
            }
            emit_point(&rec, point_format)
        }
    }
}

fn split_result(r: &cpld_core::Result<f64>) -> (Value, &'static str) {
    match r {
        Ok(v) => ((*v).into(), "ok"),
        Err(e) => (Value::Null, e.status()),
    }
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        x.into()
    } else {
        Value::Null
    }
}

fn constant_json(r: &ConstantRecord) -> Map<String, Value> {
    let mut rec = Map::new();
    rec.insert("n".into(), r.n.into());
    rec.insert("R".into(), num(r.radius));
    rec.insert("Lambda1".into(), num(r.lambda1_eigen));
    rec.insert("lambda1".into(), num(r.lambda1));
    rec.insert("A_min".into(), num(r.a_min));
    rec.insert("B_min".into(), num(r.b_min));
    rec.insert("J_min".into(), num(r.j_min));
    rec.insert("C".into(), num(r.c));
    rec.insert("C_raw".into(), num(r.c_raw));
    rec.insert("status".into(), r.status.as_str().into());
    rec
}

fn emit_point(rec: &Map<String, Value>, format: Format) -> Outcome {
    match format {
        Format::Json => with_output(None, |w| write_json(w, &Value::Object(rec.clone()))),
        Format::Csv => with_output(None, |w| {
            let header: Vec<&str> = rec.keys().map(String::as_str).collect();
            let values: Vec<String> = rec
                .values()
                .map(|v| match v {
                    Value::Number(x) if x.is_f64() => fmt_f64(x.as_f64().unwrap_or(f64::NAN)),
                    Value::Number(x) => x.to_string(),
                    Value::String(s) => s.clone(),
                    Value::Null => "NaN".to_string(),
                    other => other.to_string(),
                })
                .collect();
            writeln!(w, "{}\n{}", header.join(","), values.join(","))
                .map_err(|e| Error::InvalidInput(format!("I/O: {e}")))
        }),
    }
}

fn write_json<W: Write>(mut w: W, v: &Value) -> cpld_core::Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::InvalidInput(e.to_string()))?;
    writeln!(w, "{text}").map_err(|e| Error::InvalidInput(format!("I/O: {e}")))
}

/// Runs `f` against the file at `path`, or standard output.
fn with_output<F>(path: Option<&Path>, f: F) -> Outcome
where
    F: FnOnce(&mut dyn Write) -> cpld_core::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| Failure::Invalid(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()
                .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            f(&mut w)?;
            w.flush().map_err(|e| Failure::Invalid(format!("stdout: {e}")))
        }
    }
}
