//! Effective potential, superpotential and the SUSY partner pair.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::SystemParams;
use crate::error::{Error, Result};
use crate::mass::{schwartz_of, MassPoint, MassProfile};
use crate::polynomials::{jacobi_p, JacobiParams, XmParams};

/// `theta = k mu(x)` with `1 -+ sin(theta)` evaluated without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub theta: f64,
    pub sin: f64,
    /// `1 - sin(theta)`
    pub one_minus: f64,
    /// `1 + sin(theta)`
    pub one_plus: f64,
}

impl Angle {
    pub fn new(theta: f64) -> Self {
        let h = FRAC_PI_4 - 0.5 * theta;
        let sm = h.sin();
        let cm = h.cos();
        Self { theta, sin: theta.sin(), one_minus: 2.0 * sm * sm, one_plus: 2.0 * cm * cm }
    }

    pub fn cos_sq(&self) -> f64 {
        self.one_minus * self.one_plus
    }

    pub(crate) fn at(params: &SystemParams, profile: &MassProfile, x: f64) -> Result<(Angle, MassPoint)> {
        let mp = profile.eval(x)?;
        let theta = params.k * mp.mu;
        if theta.abs() > FRAC_PI_2 * (1.0 + 1e-12) {
            return Err(Error::Domain {
                func: "scarf",
                detail: format!("x = {x} lies outside the admissible domain (theta = {theta})"),
            });
        }
        Ok((Angle::new(theta.clamp(-FRAC_PI_2, FRAC_PI_2)), mp))
    }
}

fn interior(func: &'static str, x: f64, a: &Angle) -> Result<()> {
    if a.one_minus <= 0.0 || a.one_plus <= 0.0 {
        return Err(Error::Singular { func, at: x, detail: "domain endpoint".into() });
    }
    Ok(())
}

const SINGULAR_DENOMINATOR: f64 = 1e-14;

/// `P_{m-1}^{(a+1, b)} / P_m^{(a, b-1)}` at `g`, with `a = -alpha-1` for the
/// first partner and `a = -alpha-2`, `b = beta+1` for the second.
fn ratio(func: &'static str, x: f64, m: u32, a: f64, b: f64, g: f64) -> Result<f64> {
    if m == 0 {
        return Ok(0.0);
    }
    let den = jacobi_p(m as i32, JacobiParams::new(a, b - 1.0), g);
    if den.abs() < SINGULAR_DENOMINATOR {
        return Err(Error::Singular { func, at: x, detail: format!("denominator polynomial {den:e}") });
    }
    Ok(jacobi_p(m as i32 - 1, JacobiParams::new(a + 1.0, b), g) / den)
}

/// Common shape of both partner potentials, without the `k^2` factor:
/// `(2a^2+2b^2-1)/8 sec^2 - (b^2-a^2)/4 sec tan - A/2 (sum + slope g) r
///  + A^2/4 cos^2 r^2 - c/8`.
#[allow(clippy::too_many_arguments)]
fn shape(a: f64, b: f64, big_a: f64, sum: f64, slope: f64, r: f64, c: f64, ang: &Angle) -> f64 {
    let sec2 = 1.0 / ang.cos_sq();
    let sectan = ang.sin * sec2;
    (2.0 * a * a + 2.0 * b * b - 1.0) / 8.0 * sec2 - (b * b - a * a) / 4.0 * sectan
        - 0.5 * big_a * (sum + slope * ang.sin) * r
        + 0.25 * big_a * big_a * ang.cos_sq() * r * r
        - c / 8.0
}

fn constant_term(xm: &XmParams) -> f64 {
    let (a, b, m) = (xm.alpha, xm.beta, xm.m as f64);
    (a + b + 1.0).powi(2) + 4.0 * m * (a - 3.0 * b - m + 1.0)
}

fn v1_at(params: &SystemParams, xm: &XmParams, x: f64, ang: &Angle) -> Result<f64> {
    let (a, b, m) = (xm.alpha, xm.beta, xm.m);
    let big_a = a - b - m as f64 + 1.0;
    let r = ratio("v_eff", x, m, -a - 1.0, b, ang.sin)?;
    let k2 = params.k * params.k;
    Ok(k2 * shape(a, b, big_a, a + b, a - b + 1.0, r, constant_term(xm), ang))
}

fn v2_at(params: &SystemParams, x: f64, ang: &Angle) -> Result<f64> {
    let xm = &params.xm;
    let (a, b, m) = (xm.alpha, xm.beta, xm.m);
    let big_a = a - b - m as f64 + 1.0;
    let r = ratio("partner_potentials", x, m, -a - 2.0, b + 1.0, ang.sin)?;
    let k2 = params.k * params.k;
    Ok(k2 * shape(a + 1.0, b + 1.0, big_a, a + b + 2.0, a - b + 1.0, r, constant_term(xm), ang))
}

/// The effective potential, including the mass-dependent Schwartz term and
/// the constant that puts the ground level of the classical (`m = 0`) system
/// at zero.
pub fn v_eff(params: &SystemParams, profile: &MassProfile, x: f64) -> Result<f64> {
    let (ang, mp) = Angle::at(params, profile, x)?;
    interior("v_eff", x, &ang)?;
    Ok(v1_at(params, &params.xm, x, &ang)? + schwartz_of(&mp))
}

/// The classical PDEM Scarf I potential (no rational terms).
pub fn v_eff_classical(params: &SystemParams, profile: &MassProfile, x: f64) -> Result<f64> {
    let (ang, mp) = Angle::at(params, profile, x)?;
    interior("v_eff_classical", x, &ang)?;
    let (a, b) = (params.alpha(), params.beta());
    let k2 = params.k * params.k;
    let sec2 = 1.0 / ang.cos_sq();
    Ok(k2 * (2.0 * a * a + 2.0 * b * b - 1.0) / 8.0 * sec2
        - k2 * (b * b - a * a) / 4.0 * ang.sin * sec2
        - k2 * (a + b + 1.0).powi(2) / 8.0
        + schwartz_of(&mp))
}

/// Dimensionless superpotential as a function of the angle:
/// `w = (alpha-beta)/2 sec + (alpha+beta+1)/2 tan
///      - A/2 cos (P_{m-1}^{(-alpha,beta)}/P_m^{(-alpha-1,beta-1)}
///                 - P_{m-1}^{(-alpha-1,beta+1)}/P_m^{(-alpha-2,beta)})`,
/// so that `W(x) = k w(k mu(x))`.
pub fn superpotential_angle(xm: &XmParams, theta: f64) -> Result<f64> {
    let ang = Angle::new(theta);
    interior("superpotential", theta, &ang)?;
    w_at(xm, theta, &ang)
}

fn w_at(xm: &XmParams, at: f64, ang: &Angle) -> Result<f64> {
    let (a, b, m) = (xm.alpha, xm.beta, xm.m);
    let cos = ang.cos_sq().sqrt();
    let mut w = 0.5 * (a - b) / cos + 0.5 * (a + b + 1.0) * ang.sin / cos;
    if m > 0 {
        let big_a = a - b - m as f64 + 1.0;
        let r1 = ratio("superpotential", at, m, -a - 1.0, b, ang.sin)?;
        let r2 = ratio("superpotential", at, m, -a - 2.0, b + 1.0, ang.sin)?;
        w -= 0.5 * big_a * cos * (r1 - r2);
    }
    Ok(w)
}

pub fn superpotential(params: &SystemParams, profile: &MassProfile, x: f64) -> Result<f64> {
    let (ang, _) = Angle::at(params, profile, x)?;
    interior("superpotential", x, &ang)?;
    Ok(params.k * w_at(&params.xm, x, &ang)?)
}

/// The partner pair `(V_1, V_2)`; `V_1` is [`v_eff`] without the Schwartz term.
pub fn partner_potentials(params: &SystemParams, profile: &MassProfile, x: f64) -> Result<(f64, f64)> {
    let (ang, _) = Angle::at(params, profile, x)?;
    interior("partner_potentials", x, &ang)?;
    Ok((v1_at(params, &params.xm, x, &ang)?, v2_at(params, x, &ang)?))
}

/// `V_2(x | alpha, beta) - V_1(x | alpha+1, beta+1) - k^2 (alpha+beta-2m+2)/2`.
pub fn shape_invariance_residual(params: &SystemParams, profile: &MassProfile, x: f64) -> Result<f64> {
    let (ang, _) = Angle::at(params, profile, x)?;
    interior("shape_invariance_residual", x, &ang)?;
    let xm = &params.xm;
    let shifted = XmParams::unchecked(xm.alpha + 1.0, xm.beta + 1.0, xm.m);
    let v2 = v2_at(params, x, &ang)?;
    let v1 = v1_at(params, &shifted, x, &ang)?;
    let k2 = params.k * params.k;
    Ok(v2 - v1 - 0.5 * k2 * (xm.alpha + xm.beta - 2.0 * xm.m as f64 + 2.0))
}
