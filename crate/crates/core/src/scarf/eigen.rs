//! Normalized eigenfunctions and the two numerical oracles built on them:
//! the Gram matrix and the finite-difference Hamiltonian residual.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::potential::{v_eff, Angle};
use super::{degree_eigenvalue, energy, SystemParams};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::mass::{MassPoint, MassProfile};
use crate::polynomials::{xm_jacobi, xm_norm};
use crate::specfun::integrate_de_vec;

/// Closed-form normalization is accepted when `|int psi^2 dx - 1|` is below this.
pub const NORM_TOLERANCE: f64 = 1e-8;

const QUAD_TOL: f64 = 1e-12;

/// Eigenstate of spectral level `nu`, built on the exceptional polynomial of
/// degree `nu + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenState {
    params: SystemParams,
    profile: MassProfile,
    pub level: u32,
    pub degree: u32,
    /// Level energy `e_nu` used by the coherent states.
    pub energy: f64,
    /// Eigenvalue of the effective Hamiltonian on this state, `e(degree)`,
    /// dimensionless.
    pub eigenvalue: f64,
    /// `sqrt(k / ||hat P_degree||^2)`.
    pub norm_const: f64,
    /// `int psi^2 dx - 1` with the closed-form constant.
    pub norm_discrepancy: f64,
    /// Extra factor applied when the discrepancy exceeded [`NORM_TOLERANCE`].
    pub rescale: f64,
}

impl EigenState {
    pub fn new(params: &SystemParams, profile: &MassProfile, level: u32) -> Result<Self> {
        let degree = level + params.m();
        let norm = xm_norm(degree, degree, &params.xm)?;
        if !(norm > 0.0) {
            return Err(Error::NoConvergence {
                func: "eigenfunction",
                detail: format!("non-positive norm {norm} at degree {degree}"),
            });
        }
        let mut state = Self {
            params: *params,
            profile: *profile,
            level,
            degree,
            energy: energy(params, level),
            eigenvalue: degree_eigenvalue(params, degree),
            norm_const: (params.k / norm).sqrt(),
            norm_discrepancy: 0.0,
            rescale: 1.0,
        };
        let total = integrate_x(params, profile, 1, |ang, mp, out| {
            out[0] = state.psi_at(ang, mp)?.powi(2);
            Ok(())
        })?[0];
        state.norm_discrepancy = total - 1.0;
        if state.norm_discrepancy.abs() > NORM_TOLERANCE {
            state.rescale = 1.0 / total.sqrt();
        }
        Ok(state)
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn profile(&self) -> &MassProfile {
        &self.profile
    }

    /// `psi(x)`; zero at the walls when the wall exponent is positive.
    pub fn psi(&self, x: f64) -> Result<f64> {
        let (ang, mp) = Angle::at(&self.params, &self.profile, x)?;
        self.psi_at(&ang, &mp)
    }

    pub(crate) fn psi_at(&self, ang: &Angle, mp: &MassPoint) -> Result<f64> {
        let xm = &self.params.xm;
        let den = xm.denominator(ang.sin);
        if den.abs() < 1e-14 {
            return Err(Error::Singular {
                func: "eigenfunction",
                at: ang.sin,
                detail: "denominator polynomial vanishes".into(),
            });
        }
        let poly = xm_jacobi(self.degree, xm, ang.sin)?;
        let wall = ang.one_minus.powf(0.5 * xm.alpha + 0.25) * ang.one_plus.powf(0.5 * xm.beta + 0.25);
        Ok(self.norm_const * self.rescale * mp.mass.powf(0.25) * wall * poly / den)
    }
}

/// Integrates `len` functions over the whole admissible domain. The nodes
/// live on the angle, `theta = pi u / 2` with `dx = dtheta / (k sqrt M)`,
/// and `1 -+ sin(theta)` come from the exact node complements, so wall
/// singularities of `psi^2` are resolved down to ~1e-300.
pub(crate) fn integrate_x(
    params: &SystemParams,
    profile: &MassProfile,
    len: usize,
    f: impl Fn(&Angle, &MassPoint, &mut [f64]) -> Result<()>,
) -> Result<Vec<f64>> {
    let k = params.k;
    let r = integrate_de_vec(
        len,
        |a, out| {
            let theta = FRAC_PI_2 * a.x;
            let (lo, hi) = ((FRAC_PI_4 * a.one_minus).sin(), (FRAC_PI_4 * a.one_plus).sin());
            let ang = Angle { theta, sin: theta.sin(), one_minus: 2.0 * lo * lo, one_plus: 2.0 * hi * hi };
            // Beyond ~1e-150 from a wall 1 -+ sin underflows; the omitted
            // piece scales like that distance to the power 2 alpha + 2 > 0.
            if ang.one_minus == 0.0 || ang.one_plus == 0.0 {
                out.fill(0.0);
                return Ok(());
            }
            let mp = profile.eval(profile.mu_inverse(theta / k))?;
            f(&ang, &mp, out)?;
            let jacobian = FRAC_PI_2 / (k * mp.mu_d1);
            out.iter_mut().for_each(|v| *v *= jacobian);
            Ok(())
        },
        QUAD_TOL,
    )?;
    Ok(r.values)
}

/// `G[i][j] = int psi_i psi_j dx` for levels `0..count`.
pub fn gram_matrix(params: &SystemParams, profile: &MassProfile, count: u32) -> Result<Vec<Vec<f64>>> {
    let states: Vec<EigenState> =
        (0..count).map(|nu| EigenState::new(params, profile, nu)).collect::<Result<_>>()?;
    let n = count as usize;
    let flat = integrate_x(params, profile, n * (n + 1) / 2, |ang, mp, out| {
        let psi: Vec<f64> = states.iter().map(|s| s.psi_at(ang, mp)).collect::<Result<_>>()?;
        let mut idx = 0;
        for i in 0..n {
            for j in i..n {
                out[idx] = psi[i] * psi[j];
                idx += 1;
            }
        }
        Ok(())
    })?;
    let mut g = vec![vec![0.0; n]; n];
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            g[i][j] = flat[idx];
            g[j][i] = flat[idx];
            idx += 1;
        }
    }
    Ok(g)
}

pub const MIN_RESIDUAL_POINTS: usize = 2000;
/// Fraction of the domain width excluded at each wall.
pub const RESIDUAL_MARGIN: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianCheck {
    /// `<psi|H psi> / <psi|M psi>` over the grid, in units of `k^2`.
    pub rayleigh: f64,
    /// Largest `|H psi - M E psi|` with `E = k^2 e(degree)`.
    pub max_residual: f64,
    pub points_used: usize,
}

/// Applies `H psi = -psi''/2 + M'/(2M) psi' + M V_eff psi` with five-point
/// differences on `grid` and compares with `M E psi`.
pub fn hamiltonian_residual(
    params: &SystemParams,
    profile: &MassProfile,
    state: &EigenState,
    grid: &GridSpec,
) -> Result<HamiltonianCheck> {
    if grid.points < MIN_RESIDUAL_POINTS {
        return Err(Error::GridTooCoarse { points: grid.points, min: MIN_RESIDUAL_POINTS });
    }
    let half = profile.half_width(params.k);
    if grid.lo <= -half || grid.hi >= half {
        return Err(Error::Domain {
            func: "hamiltonian_residual",
            detail: format!("grid [{}, {}] must lie strictly inside (-{half}, {half})", grid.lo, grid.hi),
        });
    }
    let x = grid.nodes();
    let psi: Vec<f64> = x.iter().map(|&x| state.psi(x)).collect::<Result<_>>()?;
    let h = grid.step();
    let k2 = params.k * params.k;
    let e = k2 * state.eigenvalue;
    let margin = RESIDUAL_MARGIN * 2.0 * half;

    let (mut num, mut den, mut worst, mut used) = (0.0, 0.0, 0.0f64, 0usize);
    for i in 2..x.len() - 2 {
        if x[i] < -half + margin || x[i] > half - margin {
            continue;
        }
        let d1 = (psi[i - 2] - 8.0 * psi[i - 1] + 8.0 * psi[i + 1] - psi[i + 2]) / (12.0 * h);
        let d2 = (-psi[i - 2] + 16.0 * psi[i - 1] - 30.0 * psi[i] + 16.0 * psi[i + 1] - psi[i + 2])
            / (12.0 * h * h);
        let mp = profile.eval(x[i])?;
        let v = v_eff(params, profile, x[i])?;
        let hpsi = -0.5 * d2 + mp.mass_d1 / (2.0 * mp.mass) * d1 + mp.mass * v * psi[i];
        num += psi[i] * hpsi;
        den += mp.mass * psi[i] * psi[i];
        worst = worst.max((hpsi - mp.mass * e * psi[i]).abs());
        used += 1;
    }
    if used == 0 {
        return Err(Error::GridTooCoarse { points: 0, min: 1 });
    }
    Ok(HamiltonianCheck { rayleigh: num / den / k2, max_residual: worst, points_used: used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::MassKind;

    #[test]
    fn closed_form_normalization_holds() {
        for (a, b, m) in [(1.0, 2.0, 0), (1.0, 2.0, 1), (1.5, 2.5, 2)] {
            let p = SystemParams::unit(a, b, m).unwrap();
            for prof in [MassProfile::constant(), MassProfile::new(MassKind::Ws, 1.0).unwrap()] {
                for nu in 0..5 {
                    let s = EigenState::new(&p, &prof, nu).unwrap();
                    assert!(s.norm_discrepancy.abs() < 1e-10, "({a},{b},{m}) nu={nu}: {}", s.norm_discrepancy);
                    assert_eq!(s.rescale, 1.0);
                    assert_eq!(s.degree, nu + m);
                }
            }
        }
    }

    #[test]
    fn ground_state_is_nodeless() {
        let p = SystemParams::unit(1.0, 2.0, 0).unwrap();
        let s = EigenState::new(&p, &MassProfile::constant(), 0).unwrap();
        for i in 1..100 {
            let x = -1.57 + 3.14 * i as f64 / 100.0;
            let want = s.norm_const * (1.0 - x.sin()).powf(0.75) * (1.0 + x.sin()).powf(1.25);
            let got = s.psi(x).unwrap();
            assert!(got > 0.0 && (got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn gram_is_identity() {
        let p = SystemParams::unit(1.0, 2.0, 1).unwrap();
        let g = gram_matrix(&p, &MassProfile::new(MassKind::Wos, 1.0).unwrap(), 6).unwrap();
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-9, "G[{i}][{j}] = {v}");
            }
        }
    }

    #[test]
    fn rayleigh_on_constant_mass() {
        let p = SystemParams::unit(1.0, 2.0, 0).unwrap();
        let prof = MassProfile::constant();
        let grid = GridSpec::centered(prof.half_width(1.0), 0.999, 4001).unwrap();
        for nu in 0..5 {
            let s = EigenState::new(&p, &prof, nu).unwrap();
            let c = hamiltonian_residual(&p, &prof, &s, &grid).unwrap();
            let e = energy(&p, nu);
            assert!((c.rayleigh - e).abs() < 1e-5 * e.max(1.0), "nu={nu}: {} vs {e}", c.rayleigh);
        }
    }

    #[test]
    fn residual_rejects_coarse_grid() {
        let p = SystemParams::unit(1.0, 2.0, 0).unwrap();
        let prof = MassProfile::constant();
        let s = EigenState::new(&p, &prof, 0).unwrap();
        let grid = GridSpec::centered(1.5, 1.0, 100).unwrap();
        assert!(matches!(hamiltonian_residual(&p, &prof, &s, &grid), Err(Error::GridTooCoarse { .. })));
    }
}
