//! Zernike bases on the d-dimensional unit ball and Lipschitz-stability
//! machinery for the Calderon problem.
//!
//! The crate is organized around five layers:
//!
//! * [`specfun`] — exact-rational and floating-point special functions
//!   (Pochhammer symbols, generalized binomials, Jacobi polynomials).
//! * [`radial`] — radial Zernike polynomials in any dimension `d >= 2`.
//! * [`harmonics`] — spherical harmonics for `d = 2, 3` plus the dimension
//!   formula and the sharp sup-norm bound for all `d >= 2`.
//! * [`quadrature`] — Gauss rules on `[0,1]` with weight `r^(d-1)`, circle
//!   and sphere rules, and full-ball inner products.
//! * [`stability`] — coefficient fields over the Zernike basis, the
//!   mixed-term cancellation condition, trace expansions, Parseval norms
//!   and the stability constants.
//! * [`dtn`] — a 2D Dirichlet-to-Neumann forward solver (spectral for
//!   radial conductivities, linear finite elements otherwise) and the
//!   Lipschitz-ratio experiment driver.

pub mod dtn;
pub mod harmonics;
pub mod quadrature;
pub mod radial;
pub mod specfun;
pub mod stability;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument left the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Pointwise evaluation is only implemented for d = 2 and d = 3.
    #[error("unsupported dimension d = {0} (pointwise evaluation needs d in {{2, 3}})")]
    UnsupportedDimension(u32),
    /// Orthogonal-polynomial recurrence construction failed.
    #[error("quadrature construction failed: {0}")]
    Quadrature(String),
    /// The forward solver did not produce a usable solution.
    #[error("solver failure: {0}")]
    Solver(String),
    /// Disk mesh generation failed.
    #[error("mesh generation failed: {0}")]
    Mesh(String),
}

pub type Result<T> = std::result::Result<T, Error>;
