//! Numerical harmonic analysis on the Heisenberg group `H^n`: the group
//! itself, sampled fields, Laguerre spectral calculus for the sublaplacian,
//! linear and bilinear Riesz means with their auxiliary operators, and the
//! bump-function decomposition used to split the bilinear multiplier.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bump;
pub mod error;
pub mod experiments;
pub mod field;
pub mod hgroup;
pub mod quadrature;
pub mod riesz;
pub mod spectral;

pub use error::{Error, Result};
