//! The two-ball relaxation `J_{A,B}` and its minimization over mass splits.
//!
//! For radial pairs `(v, w)` on `B_A` and `B_B` the minimizer satisfies
//! `A² v = μ v`, `A² w = μ w` with `v(A) = w(B) = 0`, matched weighted fluxes
//! and `A v(A) + A w(B) = 0`. Writing `μ = λ²` and `M_± = M(±λ/2, n/2, ·)`,
//! a nontrivial solution exists iff
//!
//! ```text
//! F(λ) = A^n e^{A²/2} h_A(λ) M₊(−B²/2) M₋(−B²/2)
//!      + B^n e^{B²/2} h_B(λ) M₊(−A²/2) M₋(−A²/2) = 0,
//! ```
//!
//! and `J_{A,B}` is the square of the smallest positive root.

use serde::{Deserialize, Serialize};

use crate::ball_spectrum::{KummerQuad, MIN_RADIUS, ROOT_REL_TOL, ZERO_ROOT_GUARD};
use crate::error::{invalid, Error, Result};
use crate::measure::{check_dim, complement_radius, half_mass_radius};
use crate::par::{self, Execution};
use crate::roots::{self, ScanPlan};

/// Default number of `A` samples over `[0, A*(R)]`.
pub const DEFAULT_GRID_POINTS: usize = 200;

pub const MIN_GRID_POINTS: usize = 16;

/// Golden-section stopping width in `A`.
pub const REFINE_TOL: f64 = 1e-8;

/// Values of `J` within this relative distance are ties; the smaller `A` wins.
pub const TIE_REL: f64 = 1e-9;

/// Continuation window around the previous root, as a fraction of it.
const CONTINUATION_WINDOW: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JabSolution {
    pub a: f64,
    pub b: f64,
    pub n: u32,
    pub lambda: f64,
    /// `μ = J_{A,B} = λ²`.
    pub mu: f64,
}

/// One sample of the `A`-profile, keeping its own failure.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSample {
    pub a: f64,
    pub b: f64,
    /// `√J_{A,B}`.
    pub lambda: Result<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub a: f64,
    pub b: f64,
    pub sqrt_j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinJabRecord {
    pub radius: f64,
    pub n: u32,
    pub a_star: f64,
    pub a_min: f64,
    pub b_min: f64,
    pub j_min: f64,
    pub profile: Vec<ProfilePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    pub grid_points: usize,
    pub exec: Execution,
    /// Start each grid point's root search near the previous root. Sequential
    /// only; ignored under parallel execution.
    pub continuation: bool,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            exec: Execution::Sequential,
            continuation: false,
        }
    }
}

fn check_radii(a: f64, b: f64) -> Result<()> {
    if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
        return Err(invalid(format!("radii must be nonnegative, got A={a}, B={b}")));
    }
    if a.max(b) < MIN_RADIUS {
        return Err(invalid(format!(
            "at least one radius must be ≥ {MIN_RADIUS}, got A={a}, B={b}"
        )));
    }
    Ok(())
}

fn side(n: u32, radius: f64, lambda: f64) -> Result<(f64, f64)> {
    // (R^n e^{R²/2} h_R(λ), M₊ M₋ at −R²/2); a zero radius contributes (0, 1)
    if radius == 0.0 {
        return Ok((0.0, 1.0));
    }
    let q = KummerQuad::at(n, 0, lambda, -0.5 * radius * radius)?;
    let flux = radius.powi(n as i32) * (0.5 * radius * radius).exp() * q.secular();
    Ok((flux, q.plus * q.minus))
}

/// The characteristic function `F(λ)` whose smallest positive root is `√J_{A,B}`.
pub fn jab_condition(n: u32, a: f64, b: f64, lambda: f64) -> Result<f64> {
    check_dim(n)?;
    if !(a >= 0.0 && b >= 0.0) || (a == 0.0 && b == 0.0) {
        return Err(invalid(format!("need A, B ≥ 0 not both zero, got A={a}, B={b}")));
    }
    let (flux_a, prod_a) = side(n, a, lambda)?;
    let (flux_b, prod_b) = side(n, b, lambda)?;
    Ok(flux_a * prod_b + flux_b * prod_a)
}

fn root_from_bracket(n: u32, a: f64, b: f64, bracket: roots::Bracket) -> Result<f64> {
    let lambda = roots::brent(|lam| jab_condition(n, a, b, lam), bracket, ROOT_REL_TOL)?;
    if lambda.abs() <= ZERO_ROOT_GUARD {
        return Err(Error::NoRootFound { ceiling: bracket.hi });
    }
    Ok(lambda)
}

/// Smallest positive root of [`jab_condition`].
pub fn solve_jab(n: u32, a: f64, b: f64) -> Result<JabSolution> {
    check_dim(n)?;
    check_radii(a, b)?;
    let plan = ScanPlan::for_ball(n, a.max(b));
    let bracket = roots::first_sign_change(|lam| jab_condition(n, a, b, lam), plan)?;
    let lambda = root_from_bracket(n, a, b, bracket)?;
    Ok(JabSolution { a, b, n, lambda, mu: lambda * lambda })
}

/// Root search seeded at `previous`: scans `previous · (1 ± 25%)` first and
/// falls back to the full scan.
fn solve_near(n: u32, a: f64, b: f64, previous: f64) -> Result<f64> {
    let lo = ((1.0 - CONTINUATION_WINDOW) * previous).max(ScanPlan::DEFAULT_STEP);
    let hi = (1.0 + CONTINUATION_WINDOW) * previous;
    let points = (((hi - lo) / ScanPlan::DEFAULT_STEP).ceil() as usize + 1).max(8);
    match roots::sign_change_in(|lam| jab_condition(n, a, b, lam), lo, hi, points)? {
        Some(bracket) => root_from_bracket(n, a, b, bracket),
        None => solve_jab(n, a, b).map(|s| s.lambda),
    }
}

/// The `A` grid over `[0, A*]` with matching `B`; the last point is the exact
/// equal split `A = B = A*`.
fn split_grid(n: u32, radius: f64, a_star: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    let last = points - 1;
    (0..points)
        .map(|i| {
            if i == 0 {
                Ok((0.0, radius))
            } else if i == last {
                Ok((a_star, a_star))
            } else {
                let a = a_star * i as f64 / last as f64;
                Ok((a, complement_radius(n, radius, a)?))
            }
        })
        .collect()
}

fn check_minimize(n: u32, radius: f64, grid_points: usize) -> Result<()> {
    check_dim(n)?;
    if !(radius >= MIN_RADIUS && radius.is_finite()) {
        return Err(invalid(format!("radius must be at least {MIN_RADIUS}, got {radius}")));
    }
    if grid_points < MIN_GRID_POINTS {
        return Err(invalid(format!(
            "grid_points must be at least {MIN_GRID_POINTS}, got {grid_points}"
        )));
    }
    Ok(())
}

/// `√J_{A,B}` along the uniform `A` grid over `[0, A*(R)]`, `B` from the mass
/// constraint.
pub fn jab_profile(n: u32, radius: f64, opts: &MinimizeOptions) -> Result<Vec<ProfileSample>> {
    check_minimize(n, radius, opts.grid_points)?;
    let a_star = half_mass_radius(n, radius)?;
    let grid = split_grid(n, radius, a_star, opts.grid_points)?;
    Ok(profile_on(n, &grid, opts))
}

fn profile_on(n: u32, grid: &[(f64, f64)], opts: &MinimizeOptions) -> Vec<ProfileSample> {
    if opts.continuation {
        let mut previous: Option<f64> = None;
        grid.iter()
            .map(|&(a, b)| {
                let lambda = match previous {
                    Some(p) => solve_near(n, a, b, p),
                    None => solve_jab(n, a, b).map(|s| s.lambda),
                };
                previous = lambda.as_ref().ok().copied();
                ProfileSample { a, b, lambda }
            })
            .collect()
    } else {
        par::map(grid, opts.exec, |&(a, b)| ProfileSample {
            a,
            b,
            lambda: solve_jab(n, a, b).map(|s| s.lambda),
        })
    }
}

/// Minimizes `J_{A,B}` subject to `Φ(A) + Φ(B) = Φ(R)` with `A ∈ [0, A*(R)]`:
/// grid search, then golden-section refinement around the best cell.
pub fn minimize_jab(n: u32, radius: f64, opts: &MinimizeOptions) -> Result<MinJabRecord> {
    check_minimize(n, radius, opts.grid_points)?;
    let a_star = half_mass_radius(n, radius)?;
    let grid = split_grid(n, radius, a_star, opts.grid_points)?;
    let samples = profile_on(n, &grid, opts);

    let mut profile = Vec::with_capacity(samples.len());
    for s in &samples {
        let lam = s.lambda.clone()?;
        profile.push(ProfilePoint { a: s.a, b: s.b, sqrt_j: lam });
    }

    let j_floor = profile
        .iter()
        .map(|p| p.sqrt_j * p.sqrt_j)
        .fold(f64::INFINITY, f64::min);
    let best = profile
        .iter()
        .position(|p| p.sqrt_j * p.sqrt_j <= j_floor * (1.0 + TIE_REL))
        .unwrap_or(0);
    let grid_best = profile[best];
    let grid_j = grid_best.sqrt_j * grid_best.sqrt_j;

    let lo = grid[best.saturating_sub(1)].0;
    let hi = grid[(best + 1).min(grid.len() - 1)].0;
    let seed = grid_best.sqrt_j;
    let j_of = |a: f64| -> Result<f64> {
        let b = complement_radius(n, radius, a)?;
        let lam = if opts.continuation {
            solve_near(n, a, b, seed)?
        } else {
            solve_jab(n, a, b)?.lambda
        };
        Ok(lam * lam)
    };
    let (a_gold, j_gold) = roots::golden_section(j_of, lo, hi, REFINE_TOL)?;

    let take_golden = if (j_gold - grid_j).abs() <= TIE_REL * grid_j {
        a_gold < grid_best.a
    } else {
        j_gold < grid_j
    };
    let (a_min, b_min, j_min) = if take_golden {
        (a_gold, complement_radius(n, radius, a_gold)?, j_gold)
    } else {
        (grid_best.a, grid_best.b, grid_j)
    };

    Ok(MinJabRecord {
        radius,
        n,
        a_star,
        a_min,
        b_min,
        j_min,
        profile,
    })
}
