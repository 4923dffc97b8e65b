//! Kummer's confluent hypergeometric function `M(a, b, z)` for real arguments.
//!
//! ```text
//! M(a, b, z) = Σ_k (a)_k / ((b)_k k!) z^k,    (a)_k = a(a+1)⋯(a+k−1)
//! ```
//!
//! The series is summed by the term recurrence
//! `t_{k+1} = t_k · (a+k) z / ((b+k)(k+1))` with compensated summation. When
//! the largest term dwarfs the result (alternating series for `z < 0` and
//! large `a`), the sum is recomputed in double-double arithmetic.
//!
//! Only `M` is ever evaluated. Regular solutions of the radial problems never
//! contain the second Kummer solution.

use std::sync::atomic::{AtomicU8, Ordering};

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{invalid, Error, Result};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 2000;

/// A term counts as negligible when `|t_k| ≤ STOP_RATIO · |partial sum|`.
const STOP_RATIO: f64 = 1e-17;

/// Consecutive negligible terms required before stopping.
const STOP_RUN: usize = 3;

/// `max|t_k| / |M|` above which the double-precision sum is discarded and the
/// series recomputed in double-double.
pub const CANCELLATION_THRESHOLD: f64 = 1e2;

/// Guards the division in the cancellation ratio.
const TINY: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KummerParams {
    a: f64,
    b: f64,
}

impl KummerParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(invalid(format!("non-finite Kummer parameters ({a}, {b})")));
        }
        if b <= 0.0 {
            return Err(invalid(format!("Kummer parameter b must be positive, got {b}")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub terms_used: usize,
    pub max_term_magnitude: f64,
    /// Set when the double-precision sum was ill-conditioned; `value` then
    /// comes from the double-double recomputation.
    pub cancellation_flag: bool,
}

impl EvalResult {
    /// `max|t_k| / max(|value|, tiny)`.
    pub fn cancellation_ratio(&self) -> f64 {
        self.max_term_magnitude / self.value.abs().max(TINY)
    }
}

/// Working precision for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// Double precision, switching to double-double on heavy cancellation.
    #[default]
    Auto,
    /// Double precision only; the cancellation flag is still reported.
    Double,
    /// Always double-double.
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Precision::Auto),
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(invalid(format!(
                "unknown precision '{other}' (expected double or extended)"
            ))),
        }
    }
}

static PRECISION: AtomicU8 = AtomicU8::new(0);

/// Sets the process-wide working precision used by [`eval_m`] and
/// [`eval_m_dz`]. Intended to be called once at startup.
pub fn set_precision(p: Precision) {
    let tag = match p {
        Precision::Auto => 0,
        Precision::Double => 1,
        Precision::Extended => 2,
    };
    PRECISION.store(tag, Ordering::Relaxed);
}

pub fn precision() -> Precision {
    match PRECISION.load(Ordering::Relaxed) {
        1 => Precision::Double,
        2 => Precision::Extended,
        _ => Precision::Auto,
    }
}

/// Rising factorial `(a)_k`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// `M(a, b, z)` at the process-wide precision.
pub fn eval_m(p: KummerParams, z: f64) -> Result<EvalResult> {
    eval_m_with(p, z, precision())
}

/// `M(a, b, z)` at an explicit precision.
pub fn eval_m_with(p: KummerParams, z: f64, prec: Precision) -> Result<EvalResult> {
    if !z.is_finite() {
        return Err(invalid(format!("non-finite argument z = {z}")));
    }
    if z == 0.0 {
        return Ok(EvalResult {
            value: 1.0,
            terms_used: 1,
            max_term_magnitude: 1.0,
            cancellation_flag: false,
        });
    }
    match prec {
        Precision::Extended => {
            let mut r = sum_extended(p.a, p.b, z)?;
            r.cancellation_flag = r.cancellation_ratio() > CANCELLATION_THRESHOLD;
            Ok(r)
        }
        Precision::Double => {
            let mut r = sum_double(p.a, p.b, z)?;
            r.cancellation_flag = r.cancellation_ratio() > CANCELLATION_THRESHOLD;
            Ok(r)
        }
        Precision::Auto => {
            let r = sum_double(p.a, p.b, z)?;
            if r.cancellation_ratio() > CANCELLATION_THRESHOLD {
                let mut ext = sum_extended(p.a, p.b, z)?;
                ext.cancellation_flag = true;
                Ok(ext)
            } else {
                Ok(r)
            }
        }
    }
}

/// `dM/dz = (a/b) · M(a+1, b+1, z)`.
pub fn eval_m_dz(p: KummerParams, z: f64) -> Result<EvalResult> {
    eval_m_dz_with(p, z, precision())
}

pub fn eval_m_dz_with(p: KummerParams, z: f64, prec: Precision) -> Result<EvalResult> {
    if p.a == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            terms_used: 0,
            max_term_magnitude: 0.0,
            cancellation_flag: false,
        });
    }
    let shifted = KummerParams::new(p.a + 1.0, p.b + 1.0)?;
    let scale = p.a / p.b;
    let r = eval_m_with(shifted, z, prec)?;
    Ok(EvalResult {
        value: scale * r.value,
        max_term_magnitude: scale.abs() * r.max_term_magnitude,
        ..r
    })
}

/// Number of positive real zeros of `M(a, b, ·)`: `⌈|a|⌉` for `a < 0`, else 0.
pub fn count_positive_roots(p: KummerParams) -> u32 {
    if p.a < 0.0 {
        (-p.a).ceil() as u32
    } else {
        0
    }
}

/// Number of negative real zeros of `M(a, b, ·)`, equal to the positive count
/// for `(b − a, b)`: `⌈a − b⌉` when `b < a`, else 0.
pub fn count_negative_roots(p: KummerParams) -> u32 {
    if p.b < p.a {
        (p.a - p.b).ceil() as u32
    } else {
        0
    }
}

fn sum_double(a: f64, b: f64, z: f64) -> Result<EvalResult> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    let mut max_term = 1.0_f64;
    let mut run = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * z / ((b + kf) * (kf + 1.0));
        term *= ratio;
        if term == 0.0 {
            // a is a non-positive integer: the series is a polynomial
            return Ok(done(sum + comp, k + 1, max_term));
        }
        // Neumaier
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        max_term = max_term.max(term.abs());

        if term.abs() <= STOP_RATIO * (sum + comp).abs() && ratio.abs() < 1.0 {
            run += 1;
            if run >= STOP_RUN {
                return Ok(done(sum + comp, k + 2, max_term));
            }
        } else {
            run = 0;
        }
    }
    Err(Error::NonConvergent { a, b, z, terms: MAX_TERMS })
}

fn sum_extended(a: f64, b: f64, z: f64) -> Result<EvalResult> {
    let a2 = TwoFloat::from(a);
    let b2 = TwoFloat::from(b);
    let mut term = TwoFloat::from(1.0);
    let mut sum = TwoFloat::from(1.0);
    let mut max_term = 1.0_f64;
    let mut run = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let num = (a2 + kf) * z;
        let den = (b2 + kf) * (kf + 1.0);
        term = dd_div(term * num, den);
        if term.hi() == 0.0 {
            return Ok(done(sum.hi() + sum.lo(), k + 1, max_term));
        }
        sum += term;
        max_term = max_term.max(term.hi().abs());

        let ratio = num.hi() / den.hi();
        if term.hi().abs() <= STOP_RATIO * sum.hi().abs() && ratio.abs() < 1.0 {
            run += 1;
            if run >= STOP_RUN {
                return Ok(done(sum.hi() + sum.lo(), k + 2, max_term));
            }
        } else {
            run = 0;
        }
    }
    Err(Error::NonConvergent { a, b, z, terms: MAX_TERMS })
}

/// `x / d` with one correction step. `TwoFloat / TwoFloat` in twofloat 0.8
/// loses the low word, while division by an `f64` is accurate.
fn dd_div(x: TwoFloat, d: TwoFloat) -> TwoFloat {
    let q = x / d.hi();
    let r = x - q * d;
    q + r / d.hi()
}

fn done(value: f64, terms_used: usize, max_term_magnitude: f64) -> EvalResult {
    EvalResult {
        value,
        terms_used,
        max_term_magnitude,
        cancellation_flag: false,
    }
}
