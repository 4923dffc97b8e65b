//! Clamped-plate eigenvalues for the bi-Laplacian with drift on centered balls
//! of anti-Gauss space (density `e^{|x|²/2}`), the two-ball `J_{A,B}` relaxation,
//! and the lower-bound constants `C(R, n) = min J_{A,B} / Λ₁(B_R)`.
//!
//! The pipeline is built from confluent hypergeometric functions `M(a, b, z)`
//! only. An independent finite-difference eigensolver ([`fd_oracle`]) validates
//! it on the radial ODE.
//!
//! Grid evaluations (sweeps, A-profiles, eigenvalue curves) run on rayon when
//! the `parallel` feature is enabled and [`Execution::Parallel`] is requested;
//! otherwise they run sequentially with identical output.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod ball_spectrum;
pub mod constants;
pub mod error;
pub mod fd_oracle;
pub mod io;
pub mod jab;
pub mod kummer;
pub mod measure;
mod par;
pub mod quad;
pub mod roots;

pub use error::{Error, Result};
pub use par::Execution;
