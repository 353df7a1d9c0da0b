//! Closed forms for the coherent-state moments and photon statistics.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scarf::{energy, SystemParams};
use crate::specfun::{bessel_i_scaled, ln_bessel_i, ln_gamma};

/// Coherent states need a strictly increasing spectrum, `e_1 = 1/2 + sigma > 0`.
pub fn check_sigma(func: &'static str, params: &SystemParams) -> Result<()> {
    let sigma = params.sigma();
    if !(sigma > -0.5) {
        return Err(Error::SigmaRange { func, sigma });
    }
    Ok(())
}

fn check_j(func: &'static str, j: f64) -> Result<()> {
    if !(j > 0.0 && j.is_finite()) {
        return Err(Error::Parameter(format!("{func}: J must be positive, got {j}")));
    }
    Ok(())
}

/// Bessel argument `2 sqrt(2J)`.
pub fn bessel_arg(j: f64) -> f64 {
    2.0 * (2.0 * j).sqrt()
}

/// `ln rho_n = ln n! - n ln 2 + ln Gamma(n+2 sigma+1) - ln Gamma(2 sigma+1)`.
pub fn ln_rho(params: &SystemParams, n: u32) -> Result<f64> {
    check_sigma("rho", params)?;
    let nf = n as f64;
    let two_sigma = 2.0 * params.sigma();
    Ok(ln_gamma(nf + 1.0) - nf * std::f64::consts::LN_2 + ln_gamma(nf + two_sigma + 1.0)
        - ln_gamma(two_sigma + 1.0))
}

pub fn rho(params: &SystemParams, n: u32) -> Result<f64> {
    Ok(ln_rho(params, n)?.exp())
}

/// `prod_{i=1}^{n} e_i`, the definition that the closed form resums.
pub fn rho_product(params: &SystemParams, n: u32) -> Result<f64> {
    check_sigma("rho", params)?;
    Ok((1..=n).map(|i| energy(params, i)).product())
}

/// `ln N^2 = -sigma ln(2J) + ln Gamma(2 sigma+1) + ln I_{2 sigma}(2 sqrt(2J))`.
pub fn ln_norm_const_sq(params: &SystemParams, j: f64) -> Result<f64> {
    check_sigma("norm_const", params)?;
    check_j("norm_const", j)?;
    let sigma = params.sigma();
    Ok(-sigma * (2.0 * j).ln() + ln_gamma(2.0 * sigma + 1.0) + ln_bessel_i(2.0 * sigma, bessel_arg(j))?)
}

pub fn norm_const(params: &SystemParams, j: f64) -> Result<f64> {
    Ok((0.5 * ln_norm_const_sq(params, j)?).exp())
}

/// `sqrt(sum_{n < terms} J^n / rho_n)`, summed in log space.
pub fn norm_const_series(params: &SystemParams, j: f64, terms: u32) -> Result<f64> {
    check_j("norm_const_series", j)?;
    let logs: Vec<f64> =
        (0..terms).map(|n| Ok(n as f64 * j.ln() - ln_rho(params, n)?)).collect::<Result<_>>()?;
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    Ok((0.5 * (top + sum.ln())).exp())
}

/// `ln |c_n|^2 = (n+sigma) ln 2J - ln n! - ln Gamma(n+2 sigma+1) - ln I_{2 sigma}`.
pub fn ln_weight(params: &SystemParams, j: f64, n: u32) -> Result<f64> {
    check_sigma("weights", params)?;
    check_j("weights", j)?;
    let sigma = params.sigma();
    let nf = n as f64;
    Ok((nf + sigma) * (2.0 * j).ln() - ln_gamma(nf + 1.0) - ln_gamma(nf + 2.0 * sigma + 1.0)
        - ln_bessel_i(2.0 * sigma, bessel_arg(j))?)
}

/// `|c_n|^2` for `n = 0..=n_max`.
pub fn weights(params: &SystemParams, j: f64, n_max: u32) -> Result<Vec<f64>> {
    (0..=n_max).map(|n| Ok(ln_weight(params, j, n)?.exp())).collect()
}

/// `I_{2 sigma + p}(z) / I_{2 sigma}(z)` for `p = 1, 2`, from exponentially
/// scaled values so that large `J` does not overflow.
fn bessel_ratios(params: &SystemParams, j: f64) -> Result<(f64, f64, f64)> {
    let nu = 2.0 * params.sigma();
    let z = bessel_arg(j);
    let i0 = bessel_i_scaled(nu, z)?;
    let i1 = bessel_i_scaled(nu + 1.0, z)?;
    let i2 = bessel_i_scaled(nu + 2.0, z)?;
    Ok((i0, i1, i2))
}

/// `<n> = sqrt(2J) I_{2 sigma+1} / I_{2 sigma}`.
pub fn mean_n(params: &SystemParams, j: f64) -> Result<f64> {
    check_sigma("mean_n", params)?;
    check_j("mean_n", j)?;
    let (i0, i1, _) = bessel_ratios(params, j)?;
    Ok((2.0 * j).sqrt() * i1 / i0)
}

/// `<n^2> = 2J I_{2 sigma+2} / I_{2 sigma} + sqrt(2J) I_{2 sigma+1} / I_{2 sigma}`.
pub fn mean_n2(params: &SystemParams, j: f64) -> Result<f64> {
    check_sigma("mean_n2", params)?;
    check_j("mean_n2", j)?;
    let (i0, i1, i2) = bessel_ratios(params, j)?;
    Ok(2.0 * j * i2 / i0 + (2.0 * j).sqrt() * i1 / i0)
}

/// Mandel parameter `sqrt(2J) (I_{2 sigma+2}/I_{2 sigma+1} - I_{2 sigma+1}/I_{2 sigma})`.
pub fn mandel(params: &SystemParams, j: f64) -> Result<f64> {
    check_sigma("mandel", params)?;
    check_j("mandel", j)?;
    let (i0, i1, i2) = bessel_ratios(params, j)?;
    Ok((2.0 * j).sqrt() * (i2 / i1 - i1 / i0))
}

/// Large-`J` expansion of the Mandel parameter through order `J^{-1/2}`:
/// `-1/2 + (4 sigma + 1)/16 sqrt(2/J)`.
pub fn mandel_asymptote(sigma: f64, j: f64) -> f64 {
    -0.5 + (4.0 * sigma + 1.0) / 16.0 * (2.0 / j).sqrt()
}

/// The expansion `-1/2 - (4 sigma+1)(4 sigma+3)/64 sqrt(2/J)` obtained by
/// keeping only the leading correction of each Bessel function. Its `J^{-1/2}`
/// coefficient is not the true one; kept for comparison.
pub fn mandel_asymptote_truncated(sigma: f64, j: f64) -> f64 {
    -0.5 - (4.0 * sigma + 1.0) * (4.0 * sigma + 3.0) / 64.0 * (2.0 / j).sqrt()
}

/// Parameter regions for `m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `-1 < beta < 0`, `alpha > -1`, `alpha < beta`.
    A,
    /// `-1 < beta < 0`, `alpha <= 0`, `alpha > beta`.
    B,
    /// `beta > 0`, `0 <= alpha < beta`.
    C,
    /// `beta > 0`, `alpha > beta`.
    D,
}

pub fn classify_region(alpha: f64, beta: f64) -> Option<Region> {
    if alpha <= -1.0 || beta <= -1.0 {
        return None;
    }
    if beta < 0.0 {
        if alpha < beta {
            Some(Region::A)
        } else if alpha > beta && alpha <= 0.0 {
            Some(Region::B)
        } else {
            None
        }
    } else if beta > 0.0 {
        if (0.0..beta).contains(&alpha) {
            Some(Region::C)
        } else if alpha > beta {
            Some(Region::D)
        } else {
            None
        }
    } else {
        None
    }
}

/// Classical period and revival time from the Taylor expansion of `e_n`
/// around the mean level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timescales {
    pub n_bar: f64,
    pub t_cl: f64,
    pub t_rev: f64,
}

/// `T_cl = 2 pi / (omega k^2 (n_bar + sigma))`, `T_rev = 4 pi / (omega k^2)`.
pub fn timescales(params: &SystemParams, j: f64) -> Result<Timescales> {
    let n_bar = mean_n(params, j)?;
    let rate = params.omega * params.k * params.k;
    Ok(Timescales {
        n_bar,
        t_cl: 2.0 * PI / (rate * (n_bar + params.sigma())),
        t_rev: 4.0 * PI / rate,
    })
}
