//! Modified Bessel function of the first kind `I_nu(z)` for real order
//! `nu > -1` and real `z >= 0`.
//!
//! Below `z = 30` the ascending power series is summed directly. Above it the
//! large-argument expansion
//! `I_nu(z) ~ e^z / sqrt(2 pi z) * sum_k (-1)^k a_k(nu) / z^k`,
//! `a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j - 1)^2) / (k! 8^k)`,
//! is used whenever it reaches full precision before its terms start to grow;
//! otherwise the power series is summed outward from its largest term in
//! log-scaled form.

use std::f64::consts::PI;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

const CROSSOVER: f64 = 30.0;
const EPS: f64 = 1e-17;

/// `I_nu(z) = mantissa * exp(shift)`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: f64,
    shift: f64,
}

fn check(nu: f64, z: f64) -> Result<()> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::Domain { func: "bessel_i", detail: format!("order nu = {nu} must exceed -1") });
    }
    if !(z >= 0.0) || z.is_infinite() {
        return Err(Error::Domain { func: "bessel_i", detail: format!("argument z = {z} must be finite and >= 0") });
    }
    Ok(())
}

fn at_zero(nu: f64) -> f64 {
    if nu == 0.0 {
        1.0
    } else if nu > 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Power series from `k = 0`; all terms are positive.
fn series(nu: f64, z: f64) -> f64 {
    let half = 0.5 * z;
    let q = half * half;
    let mut term = (nu * half.ln() - ln_gamma(nu + 1.0)).exp();
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + nu));
        sum += term;
        if term < EPS * sum && k > half {
            return sum;
        }
        k += 1.0;
    }
}

/// Power series started at its largest term, in scaled form.
fn series_from_peak(nu: f64, z: f64) -> Scaled {
    let half = 0.5 * z;
    let q = half * half;
    let peak = ((-nu + (nu * nu + 4.0 * q).sqrt()) * 0.5).floor().max(0.0);
    let shift = (2.0 * peak + nu) * half.ln() - ln_gamma(peak + 1.0) - ln_gamma(peak + nu + 1.0);
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut k = peak + 1.0;
    loop {
        term *= q / (k * (k + nu));
        sum += term;
        if term < EPS * sum {
            break;
        }
        k += 1.0;
    }
    term = 1.0;
    let mut k = peak;
    while k >= 1.0 {
        term *= k * (k + nu) / q;
        sum += term;
        if term < EPS * sum {
            break;
        }
        k -= 1.0;
    }
    Scaled { mantissa: sum, shift }
}

/// Large-argument expansion; `None` when it cannot reach full precision.
fn asymptotic(nu: f64, z: f64) -> Option<Scaled> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (k * 8.0 * z);
        if next == 0.0 {
            break;
        }
        if next.abs() > term.abs() {
            return None;
        }
        sum += next;
        term = next;
        if term.abs() < EPS * sum.abs() {
            break;
        }
        k += 1.0;
        if k > 500.0 {
            return None;
        }
    }
    Some(Scaled { mantissa: sum / (2.0 * PI * z).sqrt(), shift: z })
}

fn scaled(nu: f64, z: f64) -> Scaled {
    if z < CROSSOVER {
        return Scaled { mantissa: series(nu, z), shift: 0.0 };
    }
    asymptotic(nu, z).unwrap_or_else(|| series_from_peak(nu, z))
}

/// `I_nu(z)`; overflows to `+inf` for `z` beyond ~700.
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(at_zero(nu));
    }
    let s = scaled(nu, z);
    Ok(s.mantissa * s.shift.exp())
}

/// `exp(-z) I_nu(z)`, finite for every `z`.
pub fn bessel_i_scaled(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(at_zero(nu));
    }
    let s = scaled(nu, z);
    Ok(s.mantissa * (s.shift - z).exp())
}

/// `ln I_nu(z)` for `z > 0`.
pub fn ln_bessel_i(nu: f64, z: f64) -> Result<f64> {
    check(nu, z)?;
    if z == 0.0 {
        return Ok(at_zero(nu).ln());
    }
    let s = scaled(nu, z);
    Ok(s.mantissa.ln() + s.shift)
}
