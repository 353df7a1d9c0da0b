//! Classical and exceptional `X_m` Jacobi polynomials.

mod exceptional;
mod jacobi;

pub use exceptional::{
    admissible, ode_residual, orthogonality_weight, xm_jacobi, xm_jacobi_jet, xm_norm, xm_overlap,
    xm_weight,
    Admissibility, Violation, XmParams, NODE_SCAN_POINTS,
};
pub use jacobi::{jacobi_jet, jacobi_p, jacobi_p_deriv, jacobi_p_sum, JacobiParams, Jet};
