//! Scalar root bracketing, Brent refinement and golden-section minimization.
//!
//! All closures return `Result` so series failures surface unchanged.

use crate::error::{Error, Result};

/// A sign change of `f` on `[lo, hi]`. `lo == hi` marks an exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Upward scan from `step` in increments of `step`. The ceiling starts at
/// `initial_ceiling` and doubles until `max_ceiling`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPlan {
    pub step: f64,
    pub initial_ceiling: f64,
    pub max_ceiling: f64,
}

impl ScanPlan {
    pub const DEFAULT_STEP: f64 = 0.25;
    pub const DEFAULT_INITIAL_CEILING: f64 = 50.0;
    pub const DEFAULT_MAX_CEILING: f64 = 6400.0;

    /// Default plan for a ball of radius `radius` in dimension `n`. The lowest
    /// frequency scales like `radius⁻²`, so for small radii the ceiling is
    /// raised past 6400 to `(n + 4)² / radius²`, which stays above the
    /// unweighted clamped-ball fundamental.
    pub fn for_ball(n: u32, radius: f64) -> Self {
        let needed = (n as f64 + 4.0).powi(2) / (radius * radius);
        Self {
            step: Self::DEFAULT_STEP,
            initial_ceiling: Self::DEFAULT_INITIAL_CEILING,
            max_ceiling: Self::DEFAULT_MAX_CEILING.max(needed),
        }
    }
}

impl Default for ScanPlan {
    fn default() -> Self {
        Self {
            step: Self::DEFAULT_STEP,
            initial_ceiling: Self::DEFAULT_INITIAL_CEILING,
            max_ceiling: Self::DEFAULT_MAX_CEILING,
        }
    }
}

/// Finds the first sign change of `f` on the grid `k · step`, `k ≥ 1`.
pub fn first_sign_change<F>(mut f: F, plan: ScanPlan) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut ceiling = plan.initial_ceiling;
    let mut k: u64 = 1;
    let mut x_prev = plan.step;
    let mut f_prev = f(x_prev)?;
    if f_prev == 0.0 {
        return Ok(Bracket { lo: x_prev, hi: x_prev, f_lo: 0.0, f_hi: 0.0 });
    }
    loop {
        loop {
            let x = (k + 1) as f64 * plan.step;
            if x > ceiling {
                break;
            }
            k += 1;
            let fx = f(x)?;
            if fx == 0.0 {
                return Ok(Bracket { lo: x, hi: x, f_lo: 0.0, f_hi: 0.0 });
            }
            if (fx < 0.0) != (f_prev < 0.0) {
                return Ok(Bracket { lo: x_prev, hi: x, f_lo: f_prev, f_hi: fx });
            }
            x_prev = x;
            f_prev = fx;
        }
        if ceiling >= plan.max_ceiling {
            return Err(Error::NoRootFound { ceiling });
        }
        ceiling = (2.0 * ceiling).min(plan.max_ceiling);
    }
}

/// First sign change of `f` on a uniform grid over `[lo, hi]`, if any.
pub fn sign_change_in<F>(mut f: F, lo: f64, hi: f64, points: usize) -> Result<Option<Bracket>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let points = points.max(2);
    let h = (hi - lo) / (points - 1) as f64;
    let mut x_prev = lo;
    let mut f_prev = f(lo)?;
    for i in 1..points {
        if f_prev == 0.0 {
            return Ok(Some(Bracket { lo: x_prev, hi: x_prev, f_lo: 0.0, f_hi: 0.0 }));
        }
        let x = if i == points - 1 { hi } else { lo + i as f64 * h };
        let fx = f(x)?;
        if fx != 0.0 && (fx < 0.0) != (f_prev < 0.0) {
            return Ok(Some(Bracket { lo: x_prev, hi: x, f_lo: f_prev, f_hi: fx }));
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        return Ok(Some(Bracket { lo: x_prev, hi: x_prev, f_lo: 0.0, f_hi: 0.0 }));
    }
    Ok(None)
}

const BRENT_MAX_ITER: usize = 200;

/// Brent's method on a sign-change bracket. Stops once the bracket is
/// narrower than `rel_tol · |x|`.
pub fn brent<F>(mut f: F, bracket: Bracket, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if bracket.lo == bracket.hi || bracket.f_lo == 0.0 {
        return Ok(bracket.lo);
    }
    if bracket.f_hi == 0.0 {
        return Ok(bracket.hi);
    }
    let mut xpre = bracket.lo;
    let mut xcur = bracket.hi;
    let mut fpre = bracket.f_lo;
    let mut fcur = bracket.f_hi;
    let mut xblk = 0.0;
    let mut fblk = 0.0;
    let mut spre = 0.0;
    let mut scur = 0.0;

    for _ in 0..BRENT_MAX_ITER {
        if fpre != 0.0 && fcur != 0.0 && (fpre < 0.0) != (fcur < 0.0) {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        let delta = 0.5 * rel_tol * xcur.abs();
        let sbis = 0.5 * (xblk - xcur);
        if fcur == 0.0 || sbis.abs() < delta {
            return Ok(xcur);
        }

        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                // secant
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                // inverse quadratic
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if 2.0 * stry.abs() < spre.abs().min(3.0 * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur += scur;
        } else {
            xcur += if sbis > 0.0 { delta } else { -delta };
        }
        fcur = f(xcur)?;
    }
    Err(Error::IterationLimit(format!(
        "Brent did not reach relative width {rel_tol:e} on [{}, {}]",
        bracket.lo, bracket.hi
    )))
}

/// Golden-section minimization of `f` on `[lo, hi]` down to width `tol`.
/// Returns the best abscissa seen and its value.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}
