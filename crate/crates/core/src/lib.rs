//! Entire functions of exponential type with respect to the boundary of the
//! Siegel upper half-space, at desk scale.
//!
//! The boundary of the Siegel domain in C^{n+1} is a copy of the Heisenberg
//! group, and square-integrable boundary restrictions of entire functions of
//! exponential type are parametrized by spectral profiles: families of Fock
//! space elements indexed by a negative frequency band `[-a, 0)`.  This crate
//! implements the finite-dimensional surrogate of that picture:
//!
//! * [`geometry`] — Heisenberg group operations, Siegel coordinates and the
//!   anisotropic norms that define exponential type;
//! * [`fock`] — truncated Fock spaces, the Bargmann representation and
//!   coherent-state traces;
//! * [`sigma`] — square lattices in C and the Weierstrass sigma function;
//! * [`pw`] — spectral profiles, synthesis, norms, fractional derivatives and
//!   the orthonormal basis;
//! * [`kernels`] — reproducing kernels of the Paley-Wiener spaces;
//! * [`sampling`] — lattice sampling sums, frame-ratio sweeps and the
//!   necessary-condition experiment;
//! * [`experiments`] — the reproducible experiment driver behind the CLI.

pub mod experiments;
pub mod fock;
pub mod geometry;
pub mod kernels;
pub mod pw;
pub mod quad;
pub mod sampling;
pub mod sigma;

use thiserror::Error;

/// Errors produced by the numerical layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty sample set")]
    EmptySampleSet,
    #[error("spectral support outside [-a, 0): {0}")]
    SupportViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use num_complex::Complex64;
