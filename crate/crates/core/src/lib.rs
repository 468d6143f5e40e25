//! Exciton-polariton dispersion renormalized by Gaussian static disorder: complex branch
//! energies, lifetimes, group velocities and the validity of the wave-vector label.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
