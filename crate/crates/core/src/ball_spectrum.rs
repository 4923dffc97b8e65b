//! Clamped eigenvalues and eigenfunctions of the drift bi-Laplacian on a
//! centered ball `B_R` of anti-Gauss space.
//!
//! For spherical-harmonic order `l` the radial part is
//! `y(r) = r^l (M₊(−r²/2) + G_R M₋(−r²/2))` with
//! `M_± = M((l ± λ)/2, n/2 + l, ·)` and eigenvalue `Λ = λ²`. The condition
//! `y(R) = 0` fixes `G_R = −M₊/M₋` at `z = −R²/2` (`M₋` has no negative
//! zeros), and `y'(R) = 0` reduces to the secular equation
//!
//! ```text
//! h_R(λ) = M₊'(z) M₋(z) − M₋'(z) M₊(z) = 0,    z = −R²/2.
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kummer::{eval_m, eval_m_dz, KummerParams};
use crate::measure::check_dim;
use crate::par::{self, Execution};
use crate::roots::{self, ScanPlan};

/// Smallest radius accepted by the eigenvalue solvers.
pub const MIN_RADIUS: f64 = 1e-3;

/// Relative bracket width for Brent refinement of frequencies.
pub const ROOT_REL_TOL: f64 = 1e-11;

/// Roots at or below this magnitude are the spurious `λ = 0` solution.
pub const ZERO_ROOT_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralMode {
    pub l: u32,
    pub lambda: f64,
    /// `Λ = λ²`.
    pub eigenvalue: f64,
    pub g_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `M₊, M₋, M₊', M₋'` at `z` for the order-`l` parameters.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KummerQuad {
    pub plus: f64,
    pub minus: f64,
    pub d_plus: f64,
    pub d_minus: f64,
}

impl KummerQuad {
    pub fn at(n: u32, l: u32, lambda: f64, z: f64) -> Result<Self> {
        let b = 0.5 * n as f64 + l as f64;
        let p = KummerParams::new(0.5 * (l as f64 + lambda), b)?;
        let m = KummerParams::new(0.5 * (l as f64 - lambda), b)?;
        Ok(Self {
            plus: eval_m(p, z)?.value,
            minus: eval_m(m, z)?.value,
            d_plus: eval_m_dz(p, z)?.value,
            d_minus: eval_m_dz(m, z)?.value,
        })
    }

    pub fn secular(&self) -> f64 {
        self.d_plus * self.minus - self.d_minus * self.plus
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius >= MIN_RADIUS && radius.is_finite()) {
        return Err(invalid(format!("radius must be at least {MIN_RADIUS}, got {radius}")));
    }
    Ok(())
}

/// Secular function `h_R(λ)`; odd in `λ`.
pub fn secular_h(n: u32, l: u32, radius: f64, lambda: f64) -> Result<f64> {
    check_dim(n)?;
    if !(radius > 0.0) {
        return Err(invalid(format!("radius must be positive, got {radius}")));
    }
    Ok(KummerQuad::at(n, l, lambda, -0.5 * radius * radius)?.secular())
}

/// Lowest clamped mode of order `l` on `B_R`.
pub fn lowest_eigenvalue(n: u32, l: u32, radius: f64) -> Result<SpectralMode> {
    check_dim(n)?;
    check_radius(radius)?;
    let h = |lam: f64| secular_h(n, l, radius, lam);
    let bracket = roots::first_sign_change(h, ScanPlan::for_ball(n, radius))?;
    let lambda = roots::brent(h, bracket, ROOT_REL_TOL)?;
    if lambda.abs() <= ZERO_ROOT_GUARD {
        return Err(Error::NoRootFound { ceiling: bracket.hi });
    }
    let q = KummerQuad::at(n, l, lambda, -0.5 * radius * radius)?;
    Ok(SpectralMode {
        l,
        lambda,
        eigenvalue: lambda * lambda,
        g_r: -q.plus / q.minus,
    })
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid("radius grid is empty"));
    }
    if grid.iter().any(|&r| !(r > 0.0)) {
        return Err(invalid("radius grid must be positive"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("radius grid must be strictly increasing"));
    }
    Ok(())
}

/// Lowest frequency `λ` of order `l` at each radius of `grid`.
pub fn eigenvalue_curve(n: u32, l: u32, grid: &[f64], exec: Execution) -> Result<Vec<(f64, f64)>> {
    check_dim(n)?;
    check_grid(grid)?;
    par::map(grid, exec, |&r| lowest_eigenvalue(n, l, r).map(|m| (r, m.lambda)))
        .into_iter()
        .collect()
}

/// One row of an eigenvalue curve with its own status.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub radius: f64,
    pub l: u32,
    pub lambda: Result<f64>,
}

/// Like [`eigenvalue_curve`] for several orders, keeping per-point failures
/// instead of aborting. Rows are ordered by `l`, then radius.
pub fn curve_points(n: u32, orders: &[u32], grid: &[f64], exec: Execution) -> Result<Vec<CurvePoint>> {
    check_dim(n)?;
    check_grid(grid)?;
    let jobs: Vec<(u32, f64)> = orders
        .iter()
        .flat_map(|&l| grid.iter().map(move |&r| (l, r)))
        .collect();
    Ok(par::map(&jobs, exec, |&(l, r)| CurvePoint {
        radius: r,
        l,
        lambda: lowest_eigenvalue(n, l, r).map(|m| m.lambda),
    }))
}

/// Samples `y(r) = r^l (M₊(−r²/2) + G_R M₋(−r²/2))` on a uniform grid over
/// `[0, R]` (both ends included).
pub fn eigenfunction_profile(mode: &SpectralMode, n: u32, radius: f64, samples: usize) -> Result<RadialProfile> {
    check_dim(n)?;
    check_radius(radius)?;
    if samples < 2 {
        return Err(invalid("profile needs at least 2 samples"));
    }
    let b = 0.5 * n as f64 + mode.l as f64;
    let p = KummerParams::new(0.5 * (mode.l as f64 + mode.lambda), b)?;
    let m = KummerParams::new(0.5 * (mode.l as f64 - mode.lambda), b)?;
    let last = samples - 1;
    let mut radii = Vec::with_capacity(samples);
    let mut values = Vec::with_capacity(samples);
    for i in 0..samples {
        let r = if i == last { radius } else { radius * i as f64 / last as f64 };
        let z = -0.5 * r * r;
        let y = r.powi(mode.l as i32) * (eval_m(p, z)?.value + mode.g_r * eval_m(m, z)?.value);
        radii.push(r);
        values.push(y);
    }
    Ok(RadialProfile { radii, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn secular_vanishes_at_zero_frequency() {
        assert_eq!(secular_h(2, 0, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn secular_is_odd() {
        for &(n, l, r, lam) in &[(2, 0, 1.0, 5.0), (3, 1, 0.7, 12.5), (5, 2, 2.0, 3.3)] {
            let a = secular_h(n, l, r, lam).unwrap();
            let b = secular_h(n, l, r, -lam).unwrap();
            assert!((a + b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }

    // 50-digit reference values of the secular function.
    #[test]
    fn secular_reference_values() {
        let got = secular_h(2, 0, 1.0, 5.0).unwrap();
        let want = 3.049_561_821_474_864_994;
        assert!((got - want).abs() / want < 1e-9, "{got}");
        let got = secular_h(3, 1, 0.7, 12.5).unwrap();
        let want = 4.108_285_840_926_875_537;
        assert!((got - want).abs() / want < 1e-9, "{got}");
    }

    #[test]
    fn mode_invariants() {
        let m = lowest_eigenvalue(2, 0, 1.0).unwrap();
        assert_eq!(m.eigenvalue, m.lambda * m.lambda);
        assert!(m.lambda > ZERO_ROOT_GUARD);
        let d = 1e-9 * m.lambda;
        let lo = secular_h(2, 0, 1.0, m.lambda - d).unwrap();
        let hi = secular_h(2, 0, 1.0, m.lambda + d).unwrap();
        assert!(lo * hi < 0.0);
    }

    #[test]
    fn domain_monotonicity() {
        let small = lowest_eigenvalue(2, 0, 1.0).unwrap().eigenvalue;
        let big = lowest_eigenvalue(2, 0, 1.5).unwrap().eigenvalue;
        assert!(big < small);
    }

    #[test]
    fn rejects_degenerate_radius() {
        assert!(lowest_eigenvalue(2, 0, 5e-4).is_err());
        assert!(lowest_eigenvalue(1, 0, 1.0).is_err());
    }

    #[test]
    fn curve_single_point_matches() {
        let c = eigenvalue_curve(2, 0, &[0.8], Execution::Sequential).unwrap();
        let m = lowest_eigenvalue(2, 0, 0.8).unwrap();
        assert_eq!(c, vec![(0.8, m.lambda)]);
    }

    #[test]
    fn curve_rejects_unsorted_grid() {
        assert!(eigenvalue_curve(2, 0, &[1.0, 0.5], Execution::Sequential).is_err());
        assert!(eigenvalue_curve(2, 0, &[], Execution::Sequential).is_err());
    }

    #[test]
    fn profile_boundary_and_origin() {
        for l in 0..3 {
            let r = 1.3;
            let mode = lowest_eigenvalue(3, l, r).unwrap();
            let prof = eigenfunction_profile(&mode, 3, r, 20_001).unwrap();
            let ymax = prof.max_abs();
            let n = prof.values.len();
            assert!(prof.values[n - 1].abs() <= 1e-8 * ymax);
            let dr = prof.radii[1];
            let dy = (3.0 * prof.values[n - 1] - 4.0 * prof.values[n - 2] + prof.values[n - 3]) / (2.0 * dr);
            assert!(dy.abs() <= 1e-6 * ymax / r, "l={l} y'(R)={dy}");
            if l == 0 {
                // y depends on r² only, so the forward difference is O(dr)
                let dy0 = (prof.values[1] - prof.values[0]) / dr;
                assert!(dy0.abs() < 1e-3 * ymax / r);
            } else {
                assert_eq!(prof.values[0], 0.0);
            }
        }
    }
}
