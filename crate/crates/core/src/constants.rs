//! `C(R, n) = min J_{A,B} / Λ₁(B_R)` and sweeps over `R` for several `n`.

use serde::{Deserialize, Serialize};

use crate::ball_spectrum::{lowest_eigenvalue, MIN_RADIUS};
use crate::error::{invalid, Result};
use crate::jab::{minimize_jab, MinimizeOptions};
use crate::measure::check_dim;
use crate::par::{self, Execution};

/// Raw ratios up to `1 + CLAMP_EPS` are reported as exactly 1.
pub const CLAMP_EPS: f64 = 1e-8;

pub const DEFAULT_SWEEP_STEPS: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NoRoot,
    Nonconvergent,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NoRoot => "no_root",
            Status::Nonconvergent => "nonconvergent",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(Status::Ok),
            "no_root" => Some(Status::NoRoot),
            "nonconvergent" => Some(Status::Nonconvergent),
            _ => None,
        }
    }

    pub(crate) fn of_error(e: &crate::Error) -> Self {
        match e.status() {
            "no_root" => Status::NoRoot,
            _ => Status::Nonconvergent,
        }
    }
}

/// One row of the constants table. Failed rows carry NaN in every numeric
/// field except `n` and `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantRecord {
    pub n: u32,
    pub radius: f64,
    /// `Λ₁(B_R)`.
    pub lambda1_eigen: f64,
    /// `√Λ₁(B_R)`.
    pub lambda1: f64,
    pub a_min: f64,
    pub b_min: f64,
    pub j_min: f64,
    pub c: f64,
    pub c_raw: f64,
    pub status: Status,
}

impl ConstantRecord {
    fn failed(n: u32, radius: f64, status: Status) -> Self {
        Self {
            n,
            radius,
            lambda1_eigen: f64::NAN,
            lambda1: f64::NAN,
            a_min: f64::NAN,
            b_min: f64::NAN,
            j_min: f64::NAN,
            c: f64::NAN,
            c_raw: f64::NAN,
            status,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

/// `C(R, n)` for the ball of radius `R`.
pub fn c_constant(n: u32, radius: f64, opts: &MinimizeOptions) -> Result<ConstantRecord> {
    check_dim(n)?;
    if !(radius >= MIN_RADIUS && radius.is_finite()) {
        return Err(invalid(format!("radius must be at least {MIN_RADIUS}, got {radius}")));
    }
    let ball = lowest_eigenvalue(n, 0, radius)?;
    let min = minimize_jab(n, radius, opts)?;
    let c_raw = min.j_min / ball.eigenvalue;
    let c = if c_raw > 1.0 && c_raw <= 1.0 + CLAMP_EPS { 1.0 } else { c_raw };
    Ok(ConstantRecord {
        n,
        radius,
        lambda1_eigen: ball.eigenvalue,
        lambda1: ball.lambda,
        a_min: min.a_min,
        b_min: min.b_min,
        j_min: min.j_min,
        c,
        c_raw,
        status: Status::Ok,
    })
}

/// `steps` radii `R_min + i (R_max − R_min)/steps`, `i = 1..=steps`; the left
/// end of `(R_min, R_max]` is excluded.
pub fn sweep_grid(r_min: f64, r_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(r_min >= MIN_RADIUS && r_max > r_min && r_max.is_finite()) {
        return Err(invalid(format!(
            "need {MIN_RADIUS} ≤ r_min < r_max, got r_min={r_min}, r_max={r_max}"
        )));
    }
    if steps < 2 {
        return Err(invalid(format!("steps must be at least 2, got {steps}")));
    }
    let h = (r_max - r_min) / steps as f64;
    Ok((1..=steps)
        .map(|i| if i == steps { r_max } else { r_min + i as f64 * h })
        .collect())
}

/// Constants on a uniform grid for each dimension, ordered by `(n, R)`.
/// Per-point failures are recorded in the row status.
pub fn sweep(
    dims: &[u32],
    r_min: f64,
    r_max: f64,
    steps: usize,
    opts: &MinimizeOptions,
) -> Result<Vec<ConstantRecord>> {
    if dims.is_empty() {
        return Err(invalid("no dimensions given"));
    }
    for &n in dims {
        check_dim(n)?;
    }
    let grid = sweep_grid(r_min, r_max, steps)?;
    let jobs: Vec<(u32, f64)> = dims
        .iter()
        .flat_map(|&n| grid.iter().map(move |&r| (n, r)))
        .collect();
    // rows are the parallel unit; each row's A-grid then runs sequentially
    let row_opts = MinimizeOptions {
        exec: Execution::Sequential,
        ..*opts
    };
    let row_exec = opts.exec;
    Ok(par::map(&jobs, row_exec, |&(n, r)| {
        c_constant(n, r, &row_opts)
            .unwrap_or_else(|e| ConstantRecord::failed(n, r, Status::of_error(&e)))
    }))
}
