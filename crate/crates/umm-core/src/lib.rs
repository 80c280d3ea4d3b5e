//! Symbolic and Monte Carlo tools for unitary matrix models with external
//! constant matrices: noncommutative polynomials, the free-probability operator
//! calculus, master fields, higher-genus correlators, Hurwitz counts and
//! Metropolis sampling of the matrix integral.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod hurwitz;
pub mod masterfield;
pub mod ncpoly;
pub mod rmt;
pub mod scalar;
pub mod series;
pub mod toprec;
pub mod validation;

pub use error::{Error, Result};
