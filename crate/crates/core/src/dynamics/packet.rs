//! Coherent-state wave packet in position space.

use num_complex::Complex64;
use rayon::prelude::*;

use super::coherent::CoherentState;
use crate::error::Result;
use crate::grid::GridSpec;
use crate::mass::{MassPoint, MassProfile};
use crate::scarf::{Angle, EigenState};

#[derive(Debug, Clone)]
pub struct WavePacket {
    cs: CoherentState,
    coefficients: Vec<f64>,
    states: Vec<EigenState>,
}

impl WavePacket {
    /// Builds the `n_max + 1` eigenstates that carry the coherent state.
    pub fn new(cs: CoherentState, profile: &MassProfile) -> Result<Self> {
        let states = (0..=cs.n_max())
            .into_par_iter()
            .map(|nu| EigenState::new(cs.params(), profile, nu))
            .collect::<Result<Vec<_>>>()?;
        let coefficients = cs.coefficients();
        Ok(Self { cs, coefficients, states })
    }

    pub fn coherent_state(&self) -> &CoherentState {
        &self.cs
    }

    pub fn states(&self) -> &[EigenState] {
        &self.states
    }

    fn psi_all(&self, x: f64) -> Result<Vec<f64>> {
        let first = &self.states[0];
        let (ang, mp) = Angle::at(first.params(), first.profile(), x)?;
        self.psi_all_at(&ang, &mp)
    }

    fn psi_all_at(&self, ang: &Angle, mp: &MassPoint) -> Result<Vec<f64>> {
        self.states.iter().map(|s| s.psi_at(ang, mp)).collect()
    }

    fn superpose(&self, psi: &[f64], t: f64) -> Complex64 {
        psi.iter()
            .zip(&self.coefficients)
            .enumerate()
            .map(|(n, (p, c))| Complex64::from_polar(c * p, -self.cs.phase(n as u32, t)))
            .sum()
    }

    pub(crate) fn density_at(&self, ang: &Angle, mp: &MassPoint, t: f64) -> Result<f64> {
        Ok(self.superpose(&self.psi_all_at(ang, mp)?, t).norm_sqr())
    }

    /// `Psi(x, t) = sum_n c_n exp(-i omega k^2 e_n t) psi_n(x)`.
    pub fn amplitude(&self, x: f64, t: f64) -> Result<Complex64> {
        Ok(self.superpose(&self.psi_all(x)?, t))
    }

    /// `|Psi(x, t)|^2`.
    pub fn density(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.amplitude(x, t)?.norm_sqr())
    }

    /// `|Psi|^2` from the double sum over `N = n + l` of
    /// `c_l c_{N-l} psi_l psi_{N-l} cos((e_{N-l} - e_l) omega k^2 t)`.
    pub fn density_double_sum(&self, x: f64, t: f64) -> Result<f64> {
        let psi = self.psi_all(x)?;
        let nm = self.cs.n_max() as usize;
        let mut sum = 0.0;
        for big in 0..=2 * nm {
            for l in big.saturating_sub(nm)..=big.min(nm) {
                let r = big - l;
                let dphi = self.cs.phase(r as u32, t) - self.cs.phase(l as u32, t);
                sum += self.coefficients[l] * self.coefficients[r] * psi[l] * psi[r] * dphi.cos();
            }
        }
        Ok(sum)
    }

    /// Density on every node of `grid`, evaluated in parallel.
    pub fn density_on(&self, grid: &GridSpec, t: f64) -> Result<Vec<f64>> {
        grid.nodes().into_par_iter().map(|x| self.density(x, t)).collect()
    }
}
