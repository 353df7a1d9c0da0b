//! Exceptional `X_m` Jacobi polynomials, their weight, norms and the
//! second-order equation they satisfy.

use std::fmt;

use super::jacobi::{jacobi_jet, jacobi_p, JacobiParams, Jet};
use crate::error::{Error, Result};
use crate::specfun::{integrate_de_with, ln_gamma_signed, Abscissa};

/// Grid used when scanning the denominator polynomial for zeros.
pub const NODE_SCAN_POINTS: usize = 10_001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XmParams {
    pub alpha: f64,
    pub beta: f64,
    pub m: u32,
}

/// The clause of the admissibility conditions that failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NotFinite,
    AlphaAtMostMinusOne,
    BetaAtMostMinusOne,
    BetaZero,
    BetaEqualsAlpha,
    /// `alpha - beta - m + 1` lands on one of `0, ..., m-1`.
    IntegerCollision(u32),
    /// `alpha <= m - 2`.
    AlphaTooSmall,
    /// `sgn(alpha - m + 1) != sgn(beta)`.
    SignMismatch,
    /// The denominator polynomial vanishes inside `[-1, 1]`.
    DenominatorNode(f64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotFinite => write!(f, "alpha and beta must be finite"),
            Violation::AlphaAtMostMinusOne => write!(f, "alpha must exceed -1"),
            Violation::BetaAtMostMinusOne => write!(f, "beta must exceed -1"),
            Violation::BetaZero => write!(f, "R1: beta must be nonzero"),
            Violation::BetaEqualsAlpha => write!(f, "R1: beta must differ from alpha"),
            Violation::IntegerCollision(k) => {
                write!(f, "R1: alpha - beta - m + 1 = {k} lies in {{0, ..., m-1}}")
            }
            Violation::AlphaTooSmall => write!(f, "R2: alpha must exceed m - 2"),
            Violation::SignMismatch => write!(f, "R2: sgn(alpha - m + 1) must equal sgn(beta)"),
            Violation::DenominatorNode(g) => {
                write!(f, "denominator P_m^(-alpha-1,beta-1) vanishes at g = {g:.12}")
            }
        }
    }
}

/// Outcome of [`admissible`]: the verdict plus the first violated clause.
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub violation: Option<Violation>,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.violation.is_none()
    }

    pub fn diagnostic(&self) -> String {
        match &self.violation {
            None => "admissible".to_string(),
            Some(v) => v.to_string(),
        }
    }
}

fn signum0(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Restrictions R1 and R2 on `(alpha, beta, m)`.
///
/// The sign clause is `sgn(alpha - m + 1) = sgn(beta)`; the variant with
/// `alpha - beta + 1` rejects the standard `(1, 2, 1)` and `(3/2, 5/2, 2)`
/// families whose weights are positive and whose denominators are nodeless.
pub fn admissible(alpha: f64, beta: f64, m: u32) -> Admissibility {
    let violation = if !alpha.is_finite() || !beta.is_finite() {
        Some(Violation::NotFinite)
    } else if alpha <= -1.0 {
        Some(Violation::AlphaAtMostMinusOne)
    } else if beta <= -1.0 {
        Some(Violation::BetaAtMostMinusOne)
    } else if m == 0 {
        None
    } else if beta == 0.0 {
        Some(Violation::BetaZero)
    } else if beta == alpha {
        Some(Violation::BetaEqualsAlpha)
    } else if let Some(k) = integer_collision(alpha - beta - m as f64 + 1.0, m) {
        Some(Violation::IntegerCollision(k))
    } else if alpha <= m as f64 - 2.0 {
        Some(Violation::AlphaTooSmall)
    } else if signum0(alpha - m as f64 + 1.0) != signum0(beta) {
        Some(Violation::SignMismatch)
    } else {
        None
    };
    Admissibility { violation }
}

fn integer_collision(v: f64, m: u32) -> Option<u32> {
    (0..m).find(|&k| v == k as f64)
}

impl XmParams {
    /// Validated parameters: R1, R2 and a nodeless denominator.
    pub fn new(alpha: f64, beta: f64, m: u32) -> Result<Self> {
        let x = Self::unchecked(alpha, beta, m);
        if let Some(v) = admissible(alpha, beta, m).violation {
            return Err(Error::Inadmissible(format!("(alpha={alpha}, beta={beta}, m={m}): {v}")));
        }
        if let Some(g) = x.denominator_node() {
            let v = Violation::DenominatorNode(g);
            return Err(Error::Inadmissible(format!("(alpha={alpha}, beta={beta}, m={m}): {v}")));
        }
        Ok(x)
    }

    /// No validation at all. Shape-invariance partners such as
    /// `(alpha+1, beta+1)` are built this way.
    pub const fn unchecked(alpha: f64, beta: f64, m: u32) -> Self {
        Self { alpha, beta, m }
    }

    pub fn s(&self) -> f64 {
        0.5 * (self.alpha + self.beta + 1.0)
    }

    pub fn sigma(&self) -> f64 {
        self.s() - self.m as f64
    }

    pub fn classical(&self) -> JacobiParams {
        JacobiParams::new(self.alpha, self.beta)
    }

    /// `P_m^{(-alpha-1, beta-1)}(g)`, the denominator of the weight.
    pub fn denominator(&self, g: f64) -> f64 {
        jacobi_p(self.m as i32, JacobiParams::new(-self.alpha - 1.0, self.beta - 1.0), g)
    }

    /// `P_{m-1}^{(-alpha, beta)}(g) / P_m^{(-alpha-1, beta-1)}(g)`, the ratio
    /// that carries every rational term of the potential. Zero for `m = 0`.
    pub fn denominator_ratio(&self, g: f64) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        let num = jacobi_p(self.m as i32 - 1, JacobiParams::new(-self.alpha, self.beta), g);
        num / self.denominator(g)
    }

    /// First zero of the denominator on `[-1, 1]`, if any, located by a
    /// uniform scan followed by bisection.
    pub fn denominator_node(&self) -> Option<f64> {
        if self.m == 0 {
            return None;
        }
        let n = NODE_SCAN_POINTS;
        let node = |i: usize| -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let mut g0 = node(0);
        let mut p0 = self.denominator(g0);
        if p0 == 0.0 {
            return Some(g0);
        }
        for i in 1..n {
            let g1 = node(i);
            let p1 = self.denominator(g1);
            if p1 == 0.0 {
                return Some(g1);
            }
            if (p0 < 0.0) != (p1 < 0.0) {
                return Some(self.bisect(g0, g1, p0));
            }
            g0 = g1;
            p0 = p1;
        }
        None
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, mut plo: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let pm = self.denominator(mid);
            if pm == 0.0 {
                return mid;
            }
            if (pm < 0.0) == (plo < 0.0) {
                lo = mid;
                plo = pm;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn check_index(func: &'static str, n: u32, x: &XmParams) -> Result<()> {
    if n < x.m {
        Err(Error::Index { func, n, m: x.m })
    } else {
        Ok(())
    }
}

/// Jet of `hat P_n^{(alpha,beta,m)}` at `g`.
pub fn xm_jacobi_jet(n: u32, x: &XmParams, g: f64) -> Result<Jet> {
    check_index("xm_jacobi", n, x)?;
    let (a, b) = (x.alpha, x.beta);
    if x.m == 0 {
        return Ok(jacobi_jet(n as i32, x.classical(), g));
    }
    let m = x.m as i32;
    let j = n as i32 - m;
    let jf = j as f64;
    let c1 = (a + b + jf + 1.0) / (2.0 * (a + jf + 1.0));
    let c2 = (a - m as f64 + 1.0) / (a + jf + 1.0);
    let gm1 = Jet::variable(g) - Jet::constant(1.0);
    let t1 = gm1
        * jacobi_jet(m, JacobiParams::new(-a - 1.0, b - 1.0), g)
        * jacobi_jet(j - 1, JacobiParams::new(a + 2.0, b), g);
    let t2 = jacobi_jet(m, JacobiParams::new(-a - 2.0, b), g)
        * jacobi_jet(j, JacobiParams::new(a + 1.0, b - 1.0), g);
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok((t1.scale(c1) + t2.scale(c2)).scale(sign))
}

/// `hat P_n^{(alpha,beta,m)}(g)` for `n >= m`; `m = 0` is the classical
/// polynomial, computed by the same code path.
pub fn xm_jacobi(n: u32, x: &XmParams, g: f64) -> Result<f64> {
    check_index("xm_jacobi", n, x)?;
    if x.m == 0 {
        return Ok(jacobi_p(n as i32, x.classical(), g));
    }
    Ok(xm_jacobi_jet(n, x, g)?.v)
}

const SINGULAR_DENOMINATOR: f64 = 1e-14;

/// `(1-g)^alpha (1+g)^beta / P_m^{(-alpha-1,beta-1)}(g)`, signed.
///
/// For `m = 1` and `beta < 0` the denominator is negative on the whole
/// interval, so this value is negative; the orthogonality measure uses the
/// squared denominator, see [`orthogonality_weight`].
pub fn xm_weight(x: &XmParams, g: f64) -> Result<f64> {
    let d = checked_denominator("xm_weight", x, g)?;
    Ok(classical_weight(x, g) / d)
}

/// `(1-g)^alpha (1+g)^beta / [P_m^{(-alpha-1,beta-1)}(g)]^2`.
pub fn orthogonality_weight(x: &XmParams, g: f64) -> Result<f64> {
    let d = checked_denominator("orthogonality_weight", x, g)?;
    Ok(classical_weight(x, g) / (d * d))
}

fn classical_weight(x: &XmParams, g: f64) -> f64 {
    (1.0 - g).powf(x.alpha) * (1.0 + g).powf(x.beta)
}

fn checked_denominator(func: &'static str, x: &XmParams, g: f64) -> Result<f64> {
    let d = x.denominator(g);
    if d.abs() < SINGULAR_DENOMINATOR {
        return Err(Error::Singular { func, at: g, detail: format!("denominator {d:e}") });
    }
    Ok(d)
}

/// Quadrature value of `int_{-1}^{1} orthogonality_weight * hat P_n hat P_l dg`,
/// the independent check on [`xm_norm`]. Endpoint factors are evaluated from
/// the exact complements `1 - g` and `1 + g` supplied by the rule.
pub fn xm_overlap(n: u32, l: u32, x: &XmParams, tol: f64) -> Result<f64> {
    check_index("xm_overlap", n, x)?;
    check_index("xm_overlap", l, x)?;
    let failure = std::cell::OnceCell::new();
    let integral = integrate_de_with(
        |at: &Abscissa| {
            let eval = || -> Result<f64> {
                let d = checked_denominator("xm_overlap", x, at.x)?;
                let w = at.one_minus.powf(x.alpha) * at.one_plus.powf(x.beta) / (d * d);
                Ok(w * xm_jacobi(n, x, at.x)? * xm_jacobi(l, x, at.x)?)
            };
            eval().unwrap_or_else(|e| {
                let _ = failure.set(e);
                0.0
            })
        },
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(integral?.value)
}

/// `int_{-1}^{1} orthogonality_weight * hat P_n hat P_l dg`.
///
/// The diagonal is
/// `2^{2s} (j-m+alpha+1) (n+beta) Gamma(j+beta) Gamma(j+alpha+2)
///  / ((2j+2s) (j+alpha+1)^2 Gamma(j+1) Gamma(j+2s))` with `j = n - m`,
/// which for `m = 0` is the classical Jacobi norm.
pub fn xm_norm(n: u32, l: u32, x: &XmParams) -> Result<f64> {
    check_index("xm_norm", n, x)?;
    check_index("xm_norm", l, x)?;
    if n != l {
        return Ok(0.0);
    }
    let (a, b, s) = (x.alpha, x.beta, x.s());
    let m = x.m as f64;
    let j = (n - x.m) as f64;
    let mut acc = SignedLog { ln: 2.0 * s * std::f64::consts::LN_2, sign: 1.0 };
    acc.factor(j - m + a + 1.0, 1.0);
    if x.m == 0 {
        acc.gamma(j + b + 1.0, 1.0)?;
    } else {
        acc.factor(j + m + b, 1.0);
        acc.gamma(j + b, 1.0)?;
    }
    acc.gamma(j + a + 2.0, 1.0)?;
    acc.factor(j + a + 1.0, -2.0);
    acc.gamma(j + 1.0, -1.0)?;
    if j == 0.0 {
        // (2s) Gamma(2s) = Gamma(2s + 1), which also covers 2s = 0.
        acc.gamma(2.0 * s + 1.0, -1.0)?;
    } else {
        acc.factor(2.0 * j + 2.0 * s, -1.0);
        acc.gamma(j + 2.0 * s, -1.0)?;
    }
    Ok(acc.sign * acc.ln.exp())
}

struct SignedLog {
    ln: f64,
    sign: f64,
}

impl SignedLog {
    fn factor(&mut self, v: f64, power: f64) {
        self.ln += power * v.abs().ln();
        if v < 0.0 && power.rem_euclid(2.0) == 1.0 {
            self.sign = -self.sign;
        }
    }

    fn gamma(&mut self, arg: f64, power: f64) -> Result<()> {
        let (l, sg) = ln_gamma_signed(arg)?;
        self.ln += power * l;
        if sg < 0.0 && power.rem_euclid(2.0) == 1.0 {
            self.sign = -self.sign;
        }
        Ok(())
    }
}

/// Residual `F'' + Q F' + R F` of the second-order equation satisfied by
/// `F = hat P_n^{(alpha,beta,m)}`, with
/// `Q = A r(g) - (alpha - beta + (alpha+beta+2) g) / (1-g^2)` and
/// `R = beta A r(g) / (1+g) + (n^2 + n(alpha+beta-2m+1) - 2 beta m) / (1-g^2)`,
/// where `A = alpha - beta - m + 1` and `r` is [`XmParams::denominator_ratio`].
pub fn ode_residual(n: u32, x: &XmParams, g: f64) -> Result<f64> {
    check_index("ode_residual", n, x)?;
    if !(g.abs() < 1.0) {
        return Err(Error::Singular { func: "ode_residual", at: g, detail: "|g| must be < 1".into() });
    }
    if x.m > 0 && x.denominator(g).abs() <= 1e-12 {
        return Err(Error::Singular {
            func: "ode_residual",
            at: g,
            detail: "denominator polynomial vanishes".into(),
        });
    }
    let f = xm_jacobi_jet(n, x, g)?;
    let (a, b) = (x.alpha, x.beta);
    let m = x.m as f64;
    let nf = n as f64;
    let big_a = a - b - m + 1.0;
    let r = x.denominator_ratio(g);
    let one_minus_g2 = (1.0 - g) * (1.0 + g);
    let q = big_a * r - (a - b + (a + b + 2.0) * g) / one_minus_g2;
    let rr = b * big_a * r / (1.0 + g) + (nf * nf + nf * (a + b - 2.0 * m + 1.0) - 2.0 * b * m) / one_minus_g2;
    Ok(f.d2 + q * f.d1 + rr * f.v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::integrate_de;

    fn xm(a: f64, b: f64, m: u32) -> XmParams {
        XmParams::new(a, b, m).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert!(admissible(1.0, 2.0, 1).is_admissible());
        assert!(admissible(1.5, 2.5, 2).is_admissible());
        assert!(admissible(1.0, 2.0, 0).is_admissible());
        let v = admissible(1.0, 1.0, 1);
        assert_eq!(v.violation, Some(Violation::BetaEqualsAlpha));
        assert!(v.diagnostic().contains("R1"));
        assert_eq!(admissible(1.0, 0.0, 1).violation, Some(Violation::BetaZero));
        assert_eq!(admissible(3.0, 1.0, 2).violation, Some(Violation::IntegerCollision(1)));
        assert_eq!(admissible(-0.5, 0.5, 2).violation, Some(Violation::AlphaTooSmall));
        assert_eq!(admissible(2.0, -0.5, 1).violation, Some(Violation::SignMismatch));
        assert_eq!(admissible(-1.0, 0.5, 0).violation, Some(Violation::AlphaAtMostMinusOne));
        assert!(admissible(-0.5, -1.0 / 3.0, 1).is_admissible());
        assert!(!admissible(1.0, 2.0, 2).is_admissible());
    }

    #[test]
    fn admissible_sets_have_nodeless_denominators() {
        for &(a, b, m) in &[(1.0, 2.0, 1), (1.5, 2.5, 2), (2.0, 1.0, 1), (-0.5, -1.0 / 3.0, 1), (4.0, 2.5, 1), (6.3, 1.2, 3)] {
            let x = XmParams::unchecked(a, b, m);
            assert!(admissible(a, b, m).is_admissible(), "{a} {b} {m}");
            assert_eq!(x.denominator_node(), None, "{a} {b} {m}");
        }
    }

    #[test]
    fn node_is_located() {
        // For m = 1 the denominator vanishes at g = (alpha+beta)/(beta-alpha).
        let x = XmParams::unchecked(2.0, -0.5, 1);
        let node = x.denominator_node().expect("node");
        assert!((node + 0.6).abs() < 1e-12, "{node}");
        assert!(XmParams::new(2.0, -0.5, 1).unwrap_err().is_inadmissible());
    }

    #[test]
    fn m_zero_is_classical() {
        let x = xm(1.0, 2.0, 0);
        for &g in &[-0.8, 0.0, 0.3, 0.95] {
            for n in 0..10 {
                assert_eq!(xm_jacobi(n, &x, g).unwrap(), jacobi_p(n as i32, JacobiParams::new(1.0, 2.0), g));
            }
            let w = (1.0 - g) * (1.0 + g) * (1.0 + g);
            assert!((xm_weight(&x, g).unwrap() - w).abs() < 1e-15);
        }
        assert_eq!(xm_weight(&x, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn lowest_degree_reduces_to_classical() {
        let x = xm(1.0, 2.0, 1);
        assert!((xm_jacobi(1, &x, 0.0).unwrap() - 1.25).abs() < 1e-15);
        for &(a, b, m) in &[(1.0, 2.0, 1), (1.5, 2.5, 2), (4.0, 2.5, 1), (6.3, 1.2, 3)] {
            let x = xm(a, b, m);
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..50 {
                let g = -0.98 + 1.96 * i as f64 / 49.0;
                let want = sign * (1.0 - m as f64 / (a + 1.0))
                    * jacobi_p(m as i32, JacobiParams::new(-a - 2.0, b), g);
                let got = xm_jacobi(m, &x, g).unwrap();
                assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn index_below_codimension() {
        let x = xm(1.5, 2.5, 2);
        assert!(matches!(xm_jacobi(1, &x, 0.0), Err(Error::Index { n: 1, m: 2, .. })));
    }

    #[test]
    fn weight_sign() {
        let x = xm(1.0, 2.0, 1);
        assert!((xm_weight(&x, 0.0).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        assert!((orthogonality_weight(&x, 0.0).unwrap() - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn norm_examples() {
        let x = xm(1.0, 2.0, 0);
        assert!((xm_norm(0, 0, &x).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        let x1 = xm(1.0, 2.0, 1);
        assert_eq!(xm_norm(1, 2, &x1).unwrap(), 0.0);
        let quad = integrate_de(
            |g| orthogonality_weight(&x1, g).unwrap() * xm_jacobi(1, &x1, g).unwrap().powi(2),
            1e-13,
        )
        .unwrap();
        let cf = xm_norm(1, 1, &x1).unwrap();
        assert!((cf - quad.value).abs() < 1e-9 * cf, "{cf} vs {}", quad.value);
    }

    #[test]
    fn norm_matches_quadrature() {
        for &(a, b, m) in &[(1.0, 2.0, 1), (1.5, 2.5, 2), (2.0, 1.0, 1), (-0.5, -1.0 / 3.0, 1), (0.3, -0.4, 0)] {
            let x = xm(a, b, m);
            for n in m..m + 7 {
                let q = xm_overlap(n, n, &x, 1e-12).unwrap();
                let cf = xm_norm(n, n, &x).unwrap();
                assert!((q - cf).abs() < 1e-9 * cf.abs(), "({a},{b},{m}) n={n}: {q} vs {cf}");
                if n > m {
                    assert!(xm_overlap(n, n - 1, &x, 1e-12).unwrap().abs() < 1e-9 * cf.abs());
                }
            }
        }
    }

    #[test]
    fn ode_examples() {
        let cases: [(u32, (f64, f64, u32), f64, f64); 3] = [
            (2, (1.0, 2.0, 0), 0.3, 1e-9),
            (2, (1.0, 2.0, 1), -0.4, 1e-9),
            (3, (1.5, 2.5, 2), 0.1, 1e-8),
        ];
        for (n, (a, b, m), g, tol) in cases {
            let r = ode_residual(n, &xm(a, b, m), g).unwrap();
            assert!(r.abs() < tol, "n={n} m={m}: {r}");
        }
        assert!(ode_residual(2, &xm(1.0, 2.0, 0), 1.0).is_err());
    }
}
