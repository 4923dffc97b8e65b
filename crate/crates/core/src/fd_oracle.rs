//! Finite-difference eigensolver for the radial clamped problem
//!
//! ```text
//! (∂²_r + ((n−1)/r + φ'(r)) ∂_r − l(l+n−2)/r²)² y = Λ y   on (0, R),
//! y(R) = y'(R) = 0,
//! ```
//!
//! for a general even convex exponent `φ`. It shares nothing with the
//! hypergeometric path and is used to validate it.
//!
//! The drift operator `L` is discretized with second-order central
//! differences on the uniform mesh `r_i = i h`, `h = R/(mesh+1)`, and the
//! discrete Rayleigh quotient `Σ w_i (L y)_i² / Σ w_i y_i²` uses trapezoid
//! weights `w_i = h r_i^{n−1} e^{φ(r_i)}`. That gives the symmetric
//! generalized problem `Lᵀ W L y = Λ W y`, solved for its smallest eigenvalue
//! by inverse iteration on a banded Cholesky factor.
//!
//! Boundary treatment, with `N = mesh + 1` the node at `r = R`:
//! - `y_N = 0`;
//! - `y'(R) = 0` through the one-sided formula `3y_N − 4y_{N−1} + y_{N−2} = 0`,
//!   so `y_{N−1} = y_{N−2}/4` is eliminated as well;
//! - at `r = R`, `L y = y''(R) ≈ (8 y_{N−1} − y_{N−2}) / (2h²)`;
//! - at the origin, `y'(0) = 0` for `l = 0` via the ghost value
//!   `y_0 = (4 y_1 − y_2)/3`, and `y(0) = 0` for `l ≥ 1`.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::measure::check_dim;

pub const MIN_MESH: usize = 64;

/// Convergence threshold on the inverse-iteration residual
/// `‖Λ K⁻¹ W x − x‖_W / ‖x‖_W`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// On fine meshes `K` has condition number `O(h⁻⁴)` and the residual
/// bottoms out above [`RESIDUAL_TOL`] at the rounding floor. The iteration
/// also stops when the residual has stopped shrinking for
/// `STAGNATION_RUN` steps while the Rayleigh quotient stays within this
/// relative spread.
pub const STATIONARY_TOL: f64 = 1e-10;

const STAGNATION_RUN: usize = 5;

pub const MAX_ITERATIONS: usize = 500;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Radial exponent `φ` of the density `e^{φ(r)}` with its derivative.
#[derive(Clone)]
pub struct RadialDensity {
    phi: ScalarFn,
    dphi: ScalarFn,
}

impl fmt::Debug for RadialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialDensity")
            .field("phi(1)", &(self.phi)(1.0))
            .field("dphi(1)", &(self.dphi)(1.0))
            .finish()
    }
}

impl RadialDensity {
    /// `φ(r) = r²/2`.
    pub fn anti_gaussian() -> Self {
        Self {
            phi: Arc::new(|r| 0.5 * r * r),
            dphi: Arc::new(|r| r),
        }
    }

    /// `φ ≡ 0`: the unweighted Euclidean problem.
    pub fn flat() -> Self {
        Self {
            phi: Arc::new(|_| 0.0),
            dphi: Arc::new(|_| 0.0),
        }
    }

    /// A custom exponent. `dphi(0)` must vanish, as it does for any smooth
    /// even `φ`.
    pub fn new<P, D>(phi: P, dphi: D) -> Result<Self>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let d0 = dphi(0.0);
        if !(d0.abs() <= 1e-12) {
            return Err(invalid(format!("dphi(0) must vanish for an even phi, got {d0}")));
        }
        Ok(Self {
            phi: Arc::new(phi),
            dphi: Arc::new(dphi),
        })
    }

    pub fn phi(&self, r: f64) -> f64 {
        (self.phi)(r)
    }

    pub fn dphi(&self, r: f64) -> f64 {
        (self.dphi)(r)
    }
}

#[derive(Debug, Clone)]
pub struct FdProblem {
    pub n: u32,
    pub l: u32,
    pub radius: f64,
    /// Number of interior unknowns.
    pub mesh: usize,
    pub density: RadialDensity,
}

impl FdProblem {
    pub fn new(n: u32, l: u32, radius: f64, mesh: usize, density: RadialDensity) -> Result<Self> {
        check_dim(n)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("radius must be positive, got {radius}")));
        }
        if mesh < MIN_MESH {
            return Err(invalid(format!("mesh must be at least {MIN_MESH}, got {mesh}")));
        }
        Ok(Self { n, l, radius, mesh, density })
    }

    pub fn step(&self) -> f64 {
        self.radius / (self.mesh + 1) as f64
    }

    /// The same problem with the mesh step halved.
    pub fn refined(&self) -> Self {
        Self {
            mesh: 2 * self.mesh + 1,
            ..self.clone()
        }
    }
}

/// Sparse row of the discrete drift operator: `(column, coefficient)`.
type Row = Vec<(usize, f64)>;

struct Discretization {
    /// Rows of `L` at nodes `1..=N`.
    rows: Vec<Row>,
    /// Quadrature weight of each row.
    row_weights: Vec<f64>,
    /// Mass weight of each unknown `y_1, …, y_{N−2}`.
    mass: Vec<f64>,
}

impl Discretization {
    fn unknowns(&self) -> usize {
        self.mass.len()
    }
}

/// Adds `coef · y_node` to `row`, expressing the node through the unknowns.
fn push_node(row: &mut Row, node: usize, coef: f64, p: &FdProblem) {
    let m = p.mesh;
    let mut add = |col: usize, c: f64| match row.iter_mut().find(|(j, _)| *j == col) {
        Some(e) => e.1 += c,
        None => row.push((col, c)),
    };
    if node == 0 {
        if p.l == 0 {
            // ghost y_0 = (4 y_1 − y_2)/3
            add(0, 4.0 * coef / 3.0);
            add(1, -coef / 3.0);
        }
    } else if node == m {
        add(m - 2, 0.25 * coef);
    } else if node < m {
        add(node - 1, coef);
    }
}

fn discretize(p: &FdProblem) -> Discretization {
    let m = p.mesh;
    let h = p.step();
    let h2 = h * h;
    let k = (p.l * (p.l + p.n - 2)) as f64;
    let weight = |r: f64| r.powi(p.n as i32 - 1) * p.density.phi(r).exp();

    let mut rows = Vec::with_capacity(m + 1);
    let mut row_weights = Vec::with_capacity(m + 1);
    for i in 1..=m {
        let r = i as f64 * h;
        let c = (p.n - 1) as f64 / r + p.density.dphi(r);
        let mut row: Row = Vec::with_capacity(3);
        push_node(&mut row, i - 1, 1.0 / h2 - c / (2.0 * h), p);
        push_node(&mut row, i, -2.0 / h2 - k / (r * r), p);
        push_node(&mut row, i + 1, 1.0 / h2 + c / (2.0 * h), p);
        rows.push(row);
        row_weights.push(h * weight(r));
    }
    // r = R: L y = y''(R)
    let mut last = Row::new();
    push_node(&mut last, m, 8.0 / (2.0 * h2), p);
    push_node(&mut last, m - 1, -1.0 / (2.0 * h2), p);
    rows.push(last);
    row_weights.push(0.5 * h * weight(p.radius));

    let mut mass = row_weights[..m - 1].to_vec();
    mass[m - 2] += row_weights[m - 1] / 16.0;
    Discretization { rows, row_weights, mass }
}

const BAND: usize = 2;

/// Cholesky factor of a symmetric positive definite matrix with half
/// bandwidth 2. `g[j][d]` holds `G[j][j−d]`.
struct BandedCholesky {
    g: Vec<[f64; BAND + 1]>,
}

impl BandedCholesky {
    /// `upper[j][d]` holds `K[j][j+d]`.
    fn factor(upper: &[[f64; BAND + 1]]) -> Result<Self> {
        let m = upper.len();
        let mut g = vec![[0.0; BAND + 1]; m];
        for j in 0..m {
            let first = j.saturating_sub(BAND);
            for i in first..j {
                let mut s = upper[i][j - i];
                for kk in first.max(i.saturating_sub(BAND))..i {
                    s -= g[j][j - kk] * g[i][i - kk];
                }
                g[j][j - i] = s / g[i][0];
            }
            let mut d = upper[j][0];
            for kk in first..j {
                d -= g[j][j - kk] * g[j][j - kk];
            }
            if !(d > 0.0) {
                return Err(Error::IterationLimit(format!(
                    "banded Cholesky lost positive definiteness at row {j}"
                )));
            }
            g[j][0] = d.sqrt();
        }
        Ok(Self { g })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = self.g.len();
        let mut z = b.to_vec();
        for j in 0..m {
            let mut s = z[j];
            for kk in j.saturating_sub(BAND)..j {
                s -= self.g[j][j - kk] * z[kk];
            }
            z[j] = s / self.g[j][0];
        }
        for j in (0..m).rev() {
            let mut s = z[j];
            for i in (j + 1)..(j + 1 + BAND).min(m) {
                s -= self.g[i][i - j] * z[i];
            }
            z[j] = s / self.g[j][0];
        }
        z
    }
}

fn assemble(d: &Discretization) -> Vec<[f64; BAND + 1]> {
    let mut upper = vec![[0.0; BAND + 1]; d.unknowns()];
    for (row, &w) in d.rows.iter().zip(&d.row_weights) {
        for &(j, a) in row {
            for &(k, b) in row {
                if k >= j {
                    upper[j][k - j] += w * a * b;
                }
            }
        }
    }
    upper
}

fn rayleigh(d: &Discretization, x: &[f64]) -> f64 {
    let num: f64 = d
        .rows
        .iter()
        .zip(&d.row_weights)
        .map(|(row, &w)| {
            let lx: f64 = row.iter().map(|&(j, a)| a * x[j]).sum();
            w * lx * lx
        })
        .sum();
    num / mass_norm2(d, x)
}

fn mass_norm2(d: &Discretization, x: &[f64]) -> f64 {
    x.iter().zip(&d.mass).map(|(v, w)| w * v * v).sum()
}

/// Smallest eigenvalue `Λ` of the discretized radial problem.
pub fn fd_lowest_eigenvalue(p: &FdProblem) -> Result<f64> {
    FdProblem::new(p.n, p.l, p.radius, p.mesh, p.density.clone())?;
    let d = discretize(p);
    let chol = BandedCholesky::factor(&assemble(&d))?;

    let h = p.step();
    let mut x: Vec<f64> = (1..=d.unknowns())
        .map(|i| {
            let r = i as f64 * h;
            (r / p.radius).powi(p.l as i32) * (1.0 - r / p.radius)
        })
        .collect();
    let norm = mass_norm2(&d, &x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);

    let mut residual = f64::INFINITY;
    let mut best = f64::INFINITY;
    let mut still = 0;
    let mut recent = [f64::NAN; STAGNATION_RUN];
    for it in 0..MAX_ITERATIONS {
        let rhs: Vec<f64> = x.iter().zip(&d.mass).map(|(v, w)| v * w).collect();
        let mut y = chol.solve(&rhs);
        let lam = rayleigh(&d, &y);
        let ny = mass_norm2(&d, &y).sqrt();
        // Λ K⁻¹ W x should reproduce x
        let scaled: Vec<f64> = y.iter().map(|v| lam * v).collect();
        let diff: Vec<f64> = scaled.iter().zip(&x).map(|(a, b)| a - b).collect();
        residual = mass_norm2(&d, &diff).sqrt();
        y.iter_mut().for_each(|v| *v /= ny);
        x = y;
        if residual <= RESIDUAL_TOL {
            return Ok(lam);
        }
        recent[it % STAGNATION_RUN] = lam;
        if residual > 0.5 * best {
            still += 1;
            let (lo, hi) = recent
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            if still >= STAGNATION_RUN && hi - lo <= STATIONARY_TOL * lam {
                return Ok(lam);
            }
        } else {
            still = 0;
        }
        best = best.min(residual);
    }
    Err(Error::IterationLimit(format!(
        "inverse iteration stalled at residual {residual:e} after {MAX_ITERATIONS} steps"
    )))
}

/// Second-order Richardson extrapolation from results at steps `2h` and `h`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    fine + (fine - coarse) / 3.0
}

/// Richardson-extrapolated eigenvalue from `p` and its refinement.
pub fn fd_extrapolated(p: &FdProblem) -> Result<f64> {
    let coarse = fd_lowest_eigenvalue(p)?;
    let fine = fd_lowest_eigenvalue(&p.refined())?;
    Ok(richardson(coarse, fine))
}
