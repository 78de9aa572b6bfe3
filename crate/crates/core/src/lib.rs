//! Fredholm theory and numerics for the mixed Dirichlet-Neumann Helmholtz
//! problem in a planar wedge.
//!
//! The wedge `Ω_α` is the sector of opening `α ∈ (0, 2π)` between the
//! half-axis `ℝ⁺` and the rotated ray `ℝ_α`. The mixed boundary value
//! problem (Dirichlet data on `ℝ_α`, Neumann data on `ℝ⁺`, complex
//! wavenumber with `Im k ≠ 0`) reduces by layer potentials to a 2×2 system
//! of Mellin convolution equations on the half-line. This crate provides:
//!
//! * [`special`] — Hankel functions of complex argument, branch-explicit
//!   complex powers and the logarithmic kernel;
//! * [`mellin`] — the symbol calculus on the compactified rectangle
//!   `𝔯 = Γ₁ ∪ Γ₂± ∪ Γ₃`, the 2×2 system symbol, its determinant,
//!   ellipticity scans and winding-number index computation;
//! * [`fredholm`] — closed-form Fredholm / unique-solvability verdicts and
//!   forbidden-angle enumeration, cross-validated against the numeric
//!   symbol;
//! * [`bie`] — Nyström discretization of the reduced boundary system on
//!   graded meshes, direct solves, conditioning sweeps and a Mellin
//!   multiplier oracle;
//! * [`potential`] — layer potentials, boundary operators, right-hand-side
//!   assembly and solution reconstruction for desk-scale verification.

pub mod bie;
pub mod fredholm;
pub mod mellin;
pub mod potential;
pub mod quad;
pub mod special;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("branch error: {0}")]
    Branch(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("numerically singular system (condition estimate {cond:.3e})")]
    SingularSystem { cond: f64 },
    #[error("symbol is not elliptic: {0}")]
    NotElliptic(String),
}

pub type Result<T> = std::result::Result<T, Error>;
