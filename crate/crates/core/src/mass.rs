//! Position-dependent mass profiles.
//!
//! Each profile supplies `M(x)`, `M'(x)` and the auxiliary function `mu` with
//! `mu' = sqrt(M)`, together with its first three derivatives in closed form.
//! The angle `theta = k mu(x)` runs over `[-pi/2, pi/2]` on the admissible
//! domain.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MassKind {
    Constant,
    /// `M = 1 / (1 + (lambda x)^2)`, regular on the whole line.
    Wos,
    /// `M = 1 / (1 - (lambda x)^2)^2`, singular at `x = +-1/lambda`.
    Ws,
}

impl MassKind {
    pub fn name(self) -> &'static str {
        match self {
            MassKind::Constant => "constant",
            MassKind::Wos => "wos",
            MassKind::Ws => "ws",
        }
    }
}

impl fmt::Display for MassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MassKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(MassKind::Constant),
            "wos" => Ok(MassKind::Wos),
            "ws" => Ok(MassKind::Ws),
            _ => Err(Error::Parameter(format!("unknown mass profile '{s}' (constant, wos, ws)"))),
        }
    }
}

/// How close `|lambda x|` may get to 1 for the singular profile.
pub const WS_CLAMP: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassProfile {
    kind: MassKind,
    lambda: f64,
}

/// `mu` and its derivatives, plus `M` and `M'`, at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassPoint {
    pub mass: f64,
    pub mass_d1: f64,
    pub mu: f64,
    pub mu_d1: f64,
    pub mu_d2: f64,
    pub mu_d3: f64,
}

impl MassProfile {
    pub const fn constant() -> Self {
        Self { kind: MassKind::Constant, lambda: 0.0 }
    }

    /// `lambda` is ignored for the constant profile.
    pub fn new(kind: MassKind, lambda: f64) -> Result<Self> {
        if kind == MassKind::Constant {
            return Ok(Self::constant());
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Parameter(format!("mass parameter lambda must be positive, got {lambda}")));
        }
        Ok(Self { kind, lambda })
    }

    pub fn kind(&self) -> MassKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn check(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::Domain { func: "mass", detail: format!("x = {x}") });
        }
        if self.kind == MassKind::Ws && (self.lambda * x).abs() > WS_CLAMP {
            return Err(Error::Domain {
                func: "mass",
                detail: format!("|lambda x| = {} reaches the turning point 1", (self.lambda * x).abs()),
            });
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> Result<MassPoint> {
        self.check(x)?;
        let l = self.lambda;
        let l2 = l * l;
        let u = l2 * x * x;
        Ok(match self.kind {
            MassKind::Constant => {
                MassPoint { mass: 1.0, mass_d1: 0.0, mu: x, mu_d1: 1.0, mu_d2: 0.0, mu_d3: 0.0 }
            }
            MassKind::Wos => {
                let q = 1.0 + u;
                let r = q.sqrt();
                MassPoint {
                    mass: 1.0 / q,
                    mass_d1: -2.0 * l2 * x / (q * q),
                    mu: (l * x).asinh() / l,
                    mu_d1: 1.0 / r,
                    mu_d2: -l2 * x / (q * r),
                    mu_d3: l2 * (2.0 * u - 1.0) / (q * q * r),
                }
            }
            MassKind::Ws => {
                let q = 1.0 - u;
                MassPoint {
                    mass: 1.0 / (q * q),
                    mass_d1: 4.0 * l2 * x / (q * q * q),
                    mu: (l * x).atanh() / l,
                    mu_d1: 1.0 / q,
                    mu_d2: 2.0 * l2 * x / (q * q),
                    mu_d3: 2.0 * l2 * (1.0 + 3.0 * u) / (q * q * q),
                }
            }
        })
    }

    pub fn mass(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.mass)
    }

    pub fn mu(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.mu)
    }

    /// Inverse of `mu`: the position where `mu(x) = v`.
    pub fn mu_inverse(&self, v: f64) -> f64 {
        let l = self.lambda;
        match self.kind {
            MassKind::Constant => v,
            MassKind::Wos => (l * v).sinh() / l,
            MassKind::Ws => (l * v).tanh() / l,
        }
    }

    /// Half-width of the symmetric domain where `|mu(x)| <= pi/(2k)`.
    pub fn half_width(&self, k: f64) -> f64 {
        self.mu_inverse(FRAC_PI_2 / k)
    }

    pub fn domain(&self, k: f64) -> (f64, f64) {
        let h = self.half_width(k);
        (-h, h)
    }

    /// `mu'''/(4 mu'^3) - 5 mu''^2/(8 mu'^4)`.
    pub fn schwartz_term(&self, x: f64) -> Result<f64> {
        Ok(schwartz_of(&self.eval(x)?))
    }
}

pub(crate) fn schwartz_of(p: &MassPoint) -> f64 {
    let d1 = p.mu_d1;
    let d1_2 = d1 * d1;
    0.25 * p.mu_d3 / (d1_2 * d1) - 0.625 * p.mu_d2 * p.mu_d2 / (d1_2 * d1_2)
}

impl fmt::Display for MassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MassKind::Constant => write!(f, "constant"),
            k => write!(f, "{k}(lambda={})", self.lambda),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profiles() -> Vec<MassProfile> {
        let mut out = vec![MassProfile::constant()];
        for &l in &[0.25, 1.0, 2.0] {
            out.push(MassProfile::new(MassKind::Wos, l).unwrap());
            out.push(MassProfile::new(MassKind::Ws, l).unwrap());
        }
        out
    }

    fn d5(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
    }

    #[test]
    fn examples() {
        let ws = MassProfile::new(MassKind::Ws, 1.0).unwrap();
        assert_eq!(ws.mass(0.0).unwrap(), 1.0);
        let wos = MassProfile::new(MassKind::Wos, 1.0).unwrap();
        assert!((wos.mu(1.0).unwrap() - 0.881_373_587_019_543).abs() < 1e-14);
        assert!(MassProfile::new(MassKind::Wos, 0.0).is_err());
        assert!(MassProfile::new(MassKind::Ws, -1.0).is_err());
        assert_eq!(MassProfile::constant().schwartz_term(0.7).unwrap(), 0.0);
    }

    #[test]
    fn domains() {
        let (lo, hi) = MassProfile::constant().domain(1.0);
        assert!((hi - FRAC_PI_2).abs() < 1e-15 && lo == -hi);
        let wos = MassProfile::new(MassKind::Wos, 1.0).unwrap();
        assert!((wos.half_width(1.0) - 2.301_298_902_307_295).abs() < 1e-13);
        let ws = MassProfile::new(MassKind::Ws, 1.0).unwrap();
        assert!((ws.half_width(1.0) - 0.917_152_335_667_274_3).abs() < 1e-13);
        for p in profiles() {
            for &k in &[0.5, 1.0, 2.0] {
                let h = p.half_width(k);
                assert!((p.mu(h).unwrap() * k - FRAC_PI_2).abs() < 1e-12, "{p} k={k}");
                assert!((p.mu(-h).unwrap() * k + FRAC_PI_2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivatives_against_differences() {
        for p in profiles() {
            let h = p.half_width(1.0);
            for i in 1..100 {
                let x = -h + 2.0 * h * i as f64 / 100.0;
                let e = p.eval(x).unwrap();
                assert!((e.mu_d1 - e.mass.sqrt()).abs() < 1e-12 * e.mu_d1);
                assert!(e.mass > 0.0);
                let step = 1e-3 * (h - x.abs()).min(1.0);
                let mu = |y| p.mu(y).unwrap();
                let fd1 = d5(mu, x, step);
                let fd2 = d5(|y| p.eval(y).unwrap().mu_d1, x, step);
                let fd3 = d5(|y| p.eval(y).unwrap().mu_d2, x, step);
                let fdm = d5(|y| p.mass(y).unwrap(), x, step);
                let tol = |v: f64| 1e-6 * v.abs().max(1.0);
                assert!((fd1 - e.mu_d1).abs() < tol(e.mu_d1), "{p} x={x}");
                assert!((fd2 - e.mu_d2).abs() < tol(e.mu_d2), "{p} x={x}");
                assert!((fd3 - e.mu_d3).abs() < tol(e.mu_d3), "{p} x={x}");
                assert!((fdm - e.mass_d1).abs() < tol(e.mass_d1), "{p} x={x}");
                assert!((e.mu_d2 - e.mass_d1 / (2.0 * e.mass.sqrt())).abs() < 1e-12 * e.mu_d2.abs().max(1.0));
            }
        }
    }

    #[test]
    fn schwartz_against_differences() {
        for (kind, lambda, x) in [(MassKind::Wos, 1.0, 0.0), (MassKind::Ws, 0.25, 0.5), (MassKind::Wos, 2.0, -0.6)] {
            let p = MassProfile::new(kind, lambda).unwrap();
            let h = 1e-3;
            let mu = |y| p.mu(y).unwrap();
            let d1 = d5(mu, x, h);
            let d2 = (-mu(x - 2.0 * h) + 16.0 * mu(x - h) - 30.0 * mu(x) + 16.0 * mu(x + h) - mu(x + 2.0 * h))
                / (12.0 * h * h);
            let d3 = (mu(x - 3.0 * h) - 8.0 * mu(x - 2.0 * h) + 13.0 * mu(x - h) - 13.0 * mu(x + h)
                + 8.0 * mu(x + 2.0 * h)
                - mu(x + 3.0 * h))
                / (8.0 * h * h * h);
            let fd = 0.25 * d3 / d1.powi(3) - 0.625 * d2 * d2 / d1.powi(4);
            let exact = p.schwartz_term(x).unwrap();
            assert!((fd - exact).abs() < 1e-6, "{kind} {lambda} {x}: {fd} vs {exact}");
        }
    }

    #[test]
    fn small_lambda_limit() {
        for kind in [MassKind::Wos, MassKind::Ws] {
            let p = MassProfile::new(kind, 1e-3).unwrap();
            for i in 0..=100 {
                let x = -1.5 + 3.0 * i as f64 / 100.0;
                assert!((p.mass(x).unwrap() - 1.0).abs() < 1e-4);
                assert!((p.mu(x).unwrap() - x).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn ws_turning_point_fails_loudly() {
        let p = MassProfile::new(MassKind::Ws, 2.0).unwrap();
        assert!(p.eval(0.5).is_err());
        assert!(p.schwartz_term(-0.6).is_err());
        assert!(p.eval(0.49).is_ok());
    }

    #[test]
    fn parse_kind() {
        assert_eq!("ws".parse::<MassKind>().unwrap(), MassKind::Ws);
        assert!("heavy".parse::<MassKind>().is_err());
    }
}
