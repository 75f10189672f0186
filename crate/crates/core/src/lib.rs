//! Numerical laboratory for the complex Monge-Ampère equation on flat tori
//! and the almost-Hermitian geometry around it.
//!
//! * [`geometry`]: periodic grids, spectral calculus, metrics, forms, `J`.
//! * [`connection`]: unitary frames, the canonical connection, torsion,
//!   curvature, Ricci form and the modified curvature tensor.
//! * [`solver`]: continuity-method Newton solver for `ω̃ⁿ = e^F ωⁿ`.
//! * [`estimates`]: pointwise and integral checks of the a priori estimates.
//! * [`monotonicity`]: harmonic-map quantities and ball-energy monotonicity.
//! * [`experiment`]: configuration, containers, orchestration and reports.

pub mod connection;
pub mod error;
pub mod estimates;
pub mod experiment;
pub mod geometry;
pub mod monotonicity;
pub mod solver;

pub use error::{Error, Result};
