//! The rationally extended Scarf I system with position-dependent mass.

mod eigen;
mod potential;

pub(crate) use eigen::integrate_x;
pub use eigen::{gram_matrix, hamiltonian_residual, EigenState, HamiltonianCheck};
pub use potential::{
    partner_potentials, shape_invariance_residual, superpotential, superpotential_angle, v_eff,
    v_eff_classical, Angle,
};

use crate::error::{Error, Result};
use crate::polynomials::XmParams;

/// `(alpha, beta, m)` together with the scale `k` of `theta = k mu(x)` and the
/// frequency `omega` of the coherent-state phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub xm: XmParams,
    pub k: f64,
    pub omega: f64,
}

impl SystemParams {
    pub fn new(xm: XmParams, k: f64, omega: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Parameter(format!("k must be positive, got {k}")));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Parameter(format!("omega must be positive, got {omega}")));
        }
        Ok(Self { xm, k, omega })
    }

    /// Validates `(alpha, beta, m)` and uses `k = omega = 1`.
    pub fn unit(alpha: f64, beta: f64, m: u32) -> Result<Self> {
        Self::new(XmParams::new(alpha, beta, m)?, 1.0, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.xm.alpha
    }

    pub fn beta(&self) -> f64 {
        self.xm.beta
    }

    pub fn m(&self) -> u32 {
        self.xm.m
    }

    pub fn s(&self) -> f64 {
        self.xm.s()
    }

    pub fn sigma(&self) -> f64 {
        self.xm.sigma()
    }
}

/// Dimensionless level energy `e_nu = nu (nu + 2 sigma) / 2`; the physical
/// value is `k^2 e_nu`. These are the energies that drive the coherent
/// states.
pub fn energy(params: &SystemParams, nu: u32) -> f64 {
    let n = nu as f64;
    0.5 * n * (n + 2.0 * params.sigma())
}

/// Eigenvalue (dimensionless) of the effective Hamiltonian on the state whose
/// polynomial has degree `n`: `n (n + 2 sigma) / 2`. For `m = 0` this equals
/// [`energy`] at `nu = n`; for `m >= 1` the level `nu` sits at degree
/// `nu + m` and the two differ by `m nu + m (m + 2 sigma) / 2`.
pub fn degree_eigenvalue(params: &SystemParams, degree: u32) -> f64 {
    let n = degree as f64;
    0.5 * n * (n + 2.0 * params.sigma())
}
