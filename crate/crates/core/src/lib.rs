//! Numerical laboratory for the satellite copies of the Mandelbrot set in the
//! logistic family `P_lambda(z) = lambda z + z^2`.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymp;
pub mod config;
pub mod error;
pub mod hgeom;
pub mod params;
pub mod qdyn;
pub mod rational;
pub mod raster;
pub mod render;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use rational::IrreducibleRational;
