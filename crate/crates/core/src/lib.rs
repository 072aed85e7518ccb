//! Space-time boundary elements for the 1D wave equation on `Ω = (0, 1)`.
//!
//! Densities live on `Σ = {0, 1} × (0, T)`. The modified Hilbert
//! transformation `H_T` supplies the test-function weighting that makes the
//! single layer operator coercive, and the retarded potentials, boundary
//! operators and Galerkin solvers are built on exact piecewise-polynomial
//! arithmetic.

pub mod config;
pub mod error;
pub mod field;
pub mod grid;
pub mod hilbert;
pub mod norms;
pub mod operators;
pub mod poly;
pub mod potentials;
pub mod quad;
pub mod solvers;
pub mod spectral;
pub mod study;
pub mod verify;

pub use error::{Error, Result};
