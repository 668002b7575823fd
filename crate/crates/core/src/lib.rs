//! Jack polynomials, Bessel functions of Dunkl type A and B, multivariate
//! Laguerre connection coefficients, and numerical checks of the Sonine-type
//! integral formulas that relate them.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cones;
pub mod error;
pub mod hyper;
pub mod jack;
pub mod laguerre;
pub mod partitions;
pub mod quadrature;
pub mod scalar;
pub mod sonine;

pub use error::{Error, Result};
pub use partitions::Partition;
pub use scalar::{Rational, Scalar};
