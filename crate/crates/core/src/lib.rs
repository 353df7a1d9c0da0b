//! Numerics for the rationally extended Scarf I system with position-dependent
//! effective mass and the Gazeau-Klauder coherent states built on it.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: gamma, modified Bessel `I_nu`, tanh-sinh quadrature.
//! * [`polynomials`]: classical Jacobi and exceptional `X_m` Jacobi polynomials.
//! * [`mass`]: mass profiles `M(x)` and the auxiliary function `mu` with `mu' = sqrt(M)`.
//! * [`scarf`]: effective potential, eigenstates, superpotential and partner potentials.
//! * [`dynamics`]: coherent-state weights, photon statistics, revivals and densities.
//! * [`validation`]: oracle checks used by the `validate` command.

pub mod dynamics;
pub mod error;
pub mod grid;
pub mod mass;
pub mod polynomials;
pub mod scarf;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
pub use grid::GridSpec;
