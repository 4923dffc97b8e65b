//! Weighted volume of centered balls in anti-Gauss space and the mass-split
//! geometry relating the two radii `A`, `B` to the ball radius `R`.
//!
//! `Φ(R) = β_n ∫₀^R e^{r²/2} r^{n−1} dr`, with `β_n` the area of the unit sphere.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quad;

const QUAD_TOL: f64 = 1e-13;

/// Round-off slack allowed on `A ∈ [0, R]` before it is treated as an error.
const CLAMP_SLACK: f64 = 1e-12;

const MAX_NEWTON: usize = 200;

/// A centered ball `B_R ⊂ ℝⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    n: u32,
    radius: f64,
}

impl BallSpec {
    pub fn new(n: u32, radius: f64) -> Result<Self> {
        check_dim(n)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { n, radius })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn volume(&self) -> Result<f64> {
        phi_volume(self.n, self.radius)
    }
}

pub(crate) fn check_dim(n: u32) -> Result<()> {
    if n < 2 {
        return Err(invalid(format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// `Γ(n/2)` for integer `n ≥ 1`, by the half-integer recurrence.
fn gamma_half(n: u32) -> f64 {
    let (mut x, mut g) = if n % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    let target = n as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// `β_n = 2 π^{n/2} / Γ(n/2)`.
pub fn unit_sphere_area(n: u32) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n)
}

/// Weighted volume `Φ(R)` of the centered ball of radius `R`.
pub fn phi_volume(n: u32, radius: f64) -> Result<f64> {
    check_dim(n)?;
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(invalid(format!("radius must be nonnegative, got {radius}")));
    }
    if radius == 0.0 {
        return Ok(0.0);
    }
    let p = (n - 1) as i32;
    let integral = quad::integrate(
        |r| (0.5 * r * r).exp() * r.powi(p),
        0.0,
        radius,
        0.0,
        QUAD_TOL,
    )?;
    Ok(unit_sphere_area(n) * integral)
}

/// `Φ'(R) = β_n e^{R²/2} R^{n−1}`.
fn phi_density(n: u32, radius: f64) -> f64 {
    unit_sphere_area(n) * (0.5 * radius * radius).exp() * radius.powi((n - 1) as i32)
}

/// Radius whose weighted volume is `v`. Bracketed Newton with bisection
/// fallback.
pub fn phi_inverse(n: u32, v: f64) -> Result<f64> {
    check_dim(n)?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(invalid(format!("volume must be nonnegative, got {v}")));
    }
    if v == 0.0 {
        return Ok(0.0);
    }

    let mut lo = 0.0;
    let mut hi = 1.0;
    while phi_volume(n, hi)? < v {
        lo = hi;
        hi *= 2.0;
        if hi > 64.0 {
            return Err(invalid(format!("volume {v} is out of range")));
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON {
        let f = phi_volume(n, x)? - v;
        if f == 0.0 {
            return Ok(x);
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let step = f / phi_density(n, x);
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::IterationLimit(format!("phi_inverse(n={n}, v={v})")))
}

/// `A*` with `2 Φ(A*) = Φ(R)`.
pub fn half_mass_radius(n: u32, radius: f64) -> Result<f64> {
    BallSpec::new(n, radius)?;
    phi_inverse(n, 0.5 * phi_volume(n, radius)?)
}

/// `B` with `Φ(A) + Φ(B) = Φ(R)`.
///
/// `A` may exceed `[0, R]` by round-off (≤ 1e-12) and is clamped; larger
/// violations are rejected.
pub fn complement_radius(n: u32, radius: f64, a: f64) -> Result<f64> {
    BallSpec::new(n, radius)?;
    if !(a >= -CLAMP_SLACK && a <= radius + CLAMP_SLACK) {
        return Err(invalid(format!("split radius {a} outside [0, {radius}]")));
    }
    let a = a.clamp(0.0, radius);
    if a == 0.0 {
        return Ok(radius);
    }
    if a == radius {
        return Ok(0.0);
    }
    let rest = (phi_volume(n, radius)? - phi_volume(n, a)?).max(0.0);
    Ok(phi_inverse(n, rest)?.min(radius))
}
