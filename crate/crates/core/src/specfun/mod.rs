//! Special functions and quadrature used throughout the crate.

mod bessel;
mod gamma;
mod quadrature;

pub use bessel::{bessel_i, bessel_i_scaled, ln_bessel_i};
pub use gamma::{gamma, ln_gamma, ln_gamma_signed, sin_pi};
pub use quadrature::{
    integrate_de, integrate_de_vec, integrate_de_with, Abscissa, Integral, QuadratureRule, VecIntegral,
    MAX_LEVEL,
};
