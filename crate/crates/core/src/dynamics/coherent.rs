//! Truncated Gazeau-Klauder coherent state and its autocorrelation.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::stats::{check_sigma, ln_weight};
use crate::error::{Error, Result};
use crate::scarf::{energy, SystemParams};

/// Default series truncation.
pub const DEFAULT_N_MAX: u32 = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    params: SystemParams,
    j: f64,
    n_max: u32,
    weights: Vec<f64>,
    tail: f64,
    tail_bound: f64,
}

impl CoherentState {
    pub fn new(params: &SystemParams, j: f64, n_max: u32) -> Result<Self> {
        check_sigma("coherent_state", params)?;
        if n_max == 0 {
            return Err(Error::Parameter("n_max must be positive".into()));
        }
        let weights: Vec<f64> = (0..=n_max).map(|n| Ok(ln_weight(params, j, n)?.exp())).collect::<Result<_>>()?;
        let (tail, tail_bound) = tail(params, j, n_max)?;
        Ok(Self { params: *params, j, n_max, weights, tail, tail_bound })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// `|c_n|^2` for `n = 0..=n_max`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `c_n = sqrt(|c_n|^2)`; the initial phases are zero.
    pub fn coefficients(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.sqrt()).collect()
    }

    /// Probability carried by the discarded levels `n > n_max`.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Geometric upper bound on [`Self::tail`].
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `omega k^2 e_n t` reduced to `[0, 2 pi)`.
    pub fn phase(&self, n: u32, t: f64) -> f64 {
        let p = &self.params;
        (p.omega * p.k * p.k * energy(p, n) * t).rem_euclid(TAU)
    }

    /// `|sum_n |c_n|^2 exp(-i omega k^2 e_n t)|^2`.
    pub fn autocorrelation_sq(&self, t: f64) -> f64 {
        let a: Complex64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(n, w)| Complex64::from_polar(*w, -self.phase(n as u32, t)))
            .sum();
        a.norm_sqr()
    }

    /// Same quantity from the Cauchy-product double sum over `N = n + l`,
    /// `sum_N sum_l |c_l|^2 |c_{N-l}|^2 exp(-i omega k^2 (N-2l)(N+2 sigma) t / 2)`,
    /// with both indices limited to `n_max`.
    pub fn autocorrelation_sq_double_sum(&self, t: f64) -> f64 {
        let p = &self.params;
        let rate = p.omega * p.k * p.k * t;
        let two_sigma = 2.0 * p.sigma();
        let nm = self.n_max as usize;
        let mut sum = Complex64::new(0.0, 0.0);
        for big in 0..=2 * nm {
            let lo = big.saturating_sub(nm);
            let hi = big.min(nm);
            let b = big as f64;
            for l in lo..=hi {
                let diff = 0.5 * (b - 2.0 * l as f64) * (b + two_sigma);
                let phase = (rate * diff).rem_euclid(TAU);
                sum += Complex64::from_polar(self.weights[l] * self.weights[big - l], -phase);
            }
        }
        sum.re
    }
}

/// Realized tail `sum_{n > n_max} |c_n|^2` and the bound
/// `|c_{n_max+1}|^2 / (1 - r)` with `r = 2J / ((n_max+2)(n_max+2 sigma+2))`,
/// the largest ratio of consecutive weights beyond the cut.
fn tail(params: &SystemParams, j: f64, n_max: u32) -> Result<(f64, f64)> {
    let first = ln_weight(params, j, n_max + 1)?.exp();
    let r = 2.0 * j / ((n_max as f64 + 2.0) * (n_max as f64 + 2.0 * params.sigma() + 2.0));
    let bound = if r < 1.0 { first / (1.0 - r) } else { f64::INFINITY };
    let mut sum = 0.0;
    let mut n = n_max + 1;
    loop {
        let w = ln_weight(params, j, n)?.exp();
        sum += w;
        // Past the peak the terms fall at least geometrically.
        if (w <= 1e-20 * sum || w == 0.0) && n as f64 > 2.0 * j {
            break;
        }
        n += 1;
        if n > n_max + 100_000 {
            break;
        }
    }
    Ok((sum, bound))
}
