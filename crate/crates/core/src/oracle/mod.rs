//! Independent brute-force references: the effective-medium integral by quadrature, a
//! slow high-precision erfcx, finite-difference derivative checks and the `verify`
//! suites built on them. Nothing here calls the production erfcx kernel except the
//! comparisons themselves.

mod dd;
mod fd;
mod integral;
pub mod quadrature;
mod reference;
mod sampler;
pub mod verify;

pub use fd::{fd_derivative_check, fd_discrepancy};
pub use integral::{
    cauchy_integral, density_mass, effective_medium_term, integral_rhs, raw_integral_rhs, Density,
    QuadratureSpec,
};
pub use quadrature::{integrate, Integral};
pub use reference::{erfcx_reference, REFERENCE_RADIUS};
pub use sampler::{radical_inverse, Halton};
