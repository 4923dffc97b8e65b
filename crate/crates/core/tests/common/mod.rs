#![allow(dead_code)]

use cpld_core::kummer::{
    count_negative_roots, count_positive_roots, eval_m, eval_m_dz, KummerParams,
};

/// Additive recurrence `frac(s + i·α)` with irrational `α`: a deterministic
/// low-discrepancy stand-in for random sampling.
pub struct Weyl {
    state: Vec<f64>,
    alpha: Vec<f64>,
}

impl Weyl {
    pub fn new(dims: usize) -> Self {
        // square roots of the first primes are rationally independent
        let primes = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];
        Self {
            state: vec![0.5; dims],
            alpha: primes[..dims].iter().map(|p| p.sqrt().fract()).collect(),
        }
    }

    /// Next point of `[0, 1)^dims`.
    pub fn next_point(&mut self) -> Vec<f64> {
        for (s, a) in self.state.iter_mut().zip(&self.alpha) {
            *s = (*s + a).fract();
        }
        self.state.clone()
    }
}

pub fn lerp(u: f64, lo: f64, hi: f64) -> f64 {
    lo + u * (hi - lo)
}

pub fn m(a: f64, b: f64, z: f64) -> f64 {
    eval_m(KummerParams::new(a, b).unwrap(), z).unwrap().value
}

pub fn dm(a: f64, b: f64, z: f64) -> f64 {
    eval_m_dz(KummerParams::new(a, b).unwrap(), z).unwrap().value
}

/// `|M(a,b,z) − e^z M(b−a,b,−z)| / max(1, |M(a,b,z)|)`.
pub fn transformation_error(a: f64, b: f64, z: f64) -> f64 {
    let lhs = m(a, b, z);
    let rhs = z.exp() * m(b - a, b, -z);
    (lhs - rhs).abs() / lhs.abs().max(1.0)
}

/// Relative gap between `M'` and a Richardson-refined central difference
/// with step `1e-5`.
pub fn derivative_error(a: f64, b: f64, z: f64) -> f64 {
    let h = 1e-5;
    let central = |h: f64| (m(a, b, z + h) - m(a, b, z - h)) / (2.0 * h);
    let fd = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    let d = dm(a, b, z);
    (d - fd).abs() / d.abs().max(m(a, b, z).abs()).max(1e-300)
}

fn sign_changes(f: impl Fn(f64) -> f64, hi: f64, step: f64) -> (u32, Vec<f64>) {
    let mut count = 0;
    let mut prev = f(step);
    let mut tail = Vec::new();
    let points = (hi / step).round() as usize;
    for i in 2..=points {
        let v = f(i as f64 * step);
        if v != 0.0 && prev != 0.0 && (v > 0.0) != (prev > 0.0) {
            count += 1;
        }
        if v != 0.0 {
            prev = v;
        }
        if i as f64 * step >= 0.9 * hi {
            tail.push(v.abs());
        }
    }
    (count, tail)
}

/// Sign changes of `f` on `(0, Z]`, doubling `Z` until the count is stable
/// across a doubling and `|f|` grows monotonically over the last tenth.
pub fn counted_zeros(f: impl Fn(f64) -> f64 + Copy) -> u32 {
    let step = 0.01;
    let mut z_max = 16.0;
    let mut last = None;
    loop {
        let (count, tail) = sign_changes(f, z_max, step);
        let growing = tail.windows(2).all(|w| w[1] >= w[0]);
        if growing && last == Some(count) {
            return count;
        }
        if z_max >= 512.0 {
            return count;
        }
        last = Some(count);
        z_max *= 2.0;
    }
}

/// `(positive ok, negative ok)` comparing counted sign changes with the
/// closed-form root counts. Negative zeros are counted through
/// `M(a,b,−z) = e^{−z} M(b−a,b,z)`.
pub fn root_counts_match(a: f64, b: f64) -> (bool, bool) {
    let p = KummerParams::new(a, b).unwrap();
    let pos = counted_zeros(|z| m(a, b, z)) == count_positive_roots(p);
    let neg = counted_zeros(|z| m(b - a, b, z)) == count_negative_roots(p);
    (pos, neg)
}
