//! Double-exponential (tanh-sinh) quadrature on `(-1, 1)`.
//!
//! The substitution `g = tanh(pi/2 sinh u)` makes integrands with algebraic
//! endpoint singularities `(1 - g)^a (1 + g)^b`, `a, b > -1`, decay
//! double-exponentially in `u`, so the trapezoid rule in `u` converges fast
//! for every exponent without building parameter-dependent rules.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Deepest refinement level; the step in `u` is `2^-level`.
pub const MAX_LEVEL: u32 = 12;

/// Truncation of the `u` axis. At `u = 6` the distance to the endpoint is ~1e-275.
const U_MAX: f64 = 6.0;

/// A quadrature node together with its exact distances to both endpoints.
///
/// Near `g = +-1` the abscissa itself rounds to `+-1`, while `1 - g` and
/// `1 + g` stay accurate down to ~1e-300.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub one_minus: f64,
    pub one_plus: f64,
}

/// Node and weight at `u`.
fn node(u: f64) -> (Abscissa, f64) {
    let v = FRAC_PI_2 * u.sinh();
    let e = (-2.0 * v.abs()).exp();
    // distance from the near endpoint, 1 - tanh|v|
    let near = 2.0 * e / (1.0 + e);
    let far = 2.0 - near;
    let x = v.signum() * (1.0 - e) / (1.0 + e);
    let w = FRAC_PI_2 * u.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    let (one_minus, one_plus) = if v >= 0.0 { (near, far) } else { (far, near) };
    (Abscissa { x, one_minus, one_plus }, w)
}

/// A fixed tanh-sinh rule at one refinement level.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    level: u32,
    nodes: Vec<Abscissa>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Rule with step `2^-level` whose abscissae are strictly inside `(-1, 1)`
    /// as floating-point numbers.
    pub fn tanh_sinh(level: u32) -> Self {
        Self::build(level, |a| a.x.abs() < 1.0)
    }

    /// Rule that keeps the deep endpoint nodes as well; only their
    /// [`Abscissa::one_minus`] / [`Abscissa::one_plus`] fields are meaningful there.
    pub fn tanh_sinh_extended(level: u32) -> Self {
        Self::build(level, |a| a.one_minus > 0.0 && a.one_plus > 0.0)
    }

    fn build(level: u32, keep: impl Fn(&Abscissa) -> bool) -> Self {
        let h = (-(level as f64)).exp2();
        let kmax = (U_MAX / h).floor() as i64;
        let mut nodes: Vec<Abscissa> = Vec::with_capacity(2 * kmax as usize + 1);
        let mut weights = Vec::with_capacity(2 * kmax as usize + 1);
        for k in -kmax..=kmax {
            let (a, w) = node(k as f64 * h);
            if !keep(&a) || w == 0.0 {
                continue;
            }
            // Deep nodes can round to the same abscissa; merge them so the
            // rule stays strictly increasing without changing any sum f(x) w.
            match nodes.last() {
                Some(prev) if prev.x == a.x && a.x.abs() < 1.0 => {
                    *weights.last_mut().unwrap() += w * h;
                }
                _ => {
                    nodes.push(a);
                    weights.push(w * h);
                }
            }
        }
        Self { level, nodes, weights }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn abscissae(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(|a| a.x)
    }

    pub fn nodes(&self) -> &[Abscissa] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(a, w)| w * f(a.x)).sum()
    }

    pub fn integrate_with(&self, f: impl Fn(&Abscissa) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(a, w)| w * f(a)).sum()
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub error: f64,
    pub level: u32,
    pub evaluations: usize,
}

/// Integrates `f` over `(-1, 1)`, refining until two consecutive levels
/// differ by less than `tol`.
pub fn integrate_de(f: impl Fn(f64) -> f64, tol: f64) -> Result<Integral> {
    refine(|a: &Abscissa| f(a.x), tol, false)
}

/// Like [`integrate_de`], but the integrand receives accurate endpoint
/// distances and the rule reaches ~1e-275 from each end.
pub fn integrate_de_with(f: impl Fn(&Abscissa) -> f64, tol: f64) -> Result<Integral> {
    refine(f, tol, true)
}

fn refine(f: impl Fn(&Abscissa) -> f64, tol: f64, extended: bool) -> Result<Integral> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let keep = |a: &Abscissa| {
        if extended {
            a.one_minus > 0.0 && a.one_plus > 0.0
        } else {
            a.x.abs() < 1.0
        }
    };
    let mut evaluations = 0usize;
    let mut eval = |u: f64| -> Result<f64> {
        let (a, w) = node(u);
        if !keep(&a) || w == 0.0 {
            return Ok(0.0);
        }
        evaluations += 1;
        let y = f(&a);
        if !y.is_finite() {
            return Err(Error::Domain {
                func: "integrate_de",
                detail: format!("integrand is not finite at g = {}", a.x),
            });
        }
        Ok(w * y)
    };

    // Level 0: all integer u.
    let mut h = 1.0;
    let mut sum = 0.0;
    let kmax = U_MAX as i64;
    for k in -kmax..=kmax {
        sum += eval(k as f64)?;
    }
    let mut estimate = h * sum;
    let mut error = f64::INFINITY;

    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let kmax = (U_MAX / h).floor() as i64;
        let mut k = -kmax | 1; // odd multiples of h only
        if k < -kmax {
            k += 2;
        }
        while k <= kmax {
            sum += eval(k as f64 * h)?;
            k += 2;
        }
        let next = h * sum;
        error = (next - estimate).abs();
        estimate = next;
        if level >= 3 && error < tol {
            return Ok(Integral { value: estimate, error, level, evaluations });
        }
    }
    Err(Error::NoConvergence {
        func: "integrate_de",
        detail: format!("estimate {estimate} with error {error:e} above tolerance {tol:e} at level {MAX_LEVEL}"),
    })
}

/// Result of [`integrate_de_vec`].
#[derive(Debug, Clone, PartialEq)]
pub struct VecIntegral {
    pub values: Vec<f64>,
    /// Largest component change between the last two levels.
    pub error: f64,
    pub level: u32,
}

/// Integrates `len` functions over `(-1, 1)` on shared nodes. The integrand
/// writes all components at one abscissa into the output slice. Refinement
/// stops when every component has settled to within `tol`. As with
/// [`integrate_de_with`], the deepest nodes are only resolved by their
/// endpoint distances.
pub fn integrate_de_vec(
    len: usize,
    f: impl Fn(&Abscissa, &mut [f64]) -> Result<()>,
    tol: f64,
) -> Result<VecIntegral> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let mut sum = vec![0.0; len];
    let mut buf = vec![0.0; len];
    let mut add = |u: f64, sum: &mut [f64]| -> Result<()> {
        let (a, w) = node(u);
        if a.one_minus <= 0.0 || a.one_plus <= 0.0 || w == 0.0 {
            return Ok(());
        }
        f(&a, &mut buf)?;
        for (s, y) in sum.iter_mut().zip(&buf) {
            if !y.is_finite() {
                return Err(Error::Domain {
                    func: "integrate_de_vec",
                    detail: format!("integrand is not finite at g = {}", a.x),
                });
            }
            *s += w * y;
        }
        Ok(())
    };

    let mut h = 1.0;
    let kmax = U_MAX as i64;
    for k in -kmax..=kmax {
        add(k as f64, &mut sum)?;
    }
    let mut estimate: Vec<f64> = sum.clone();
    let mut error = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let kmax = (U_MAX / h).floor() as i64;
        let mut k = -kmax | 1;
        if k < -kmax {
            k += 2;
        }
        while k <= kmax {
            add(k as f64 * h, &mut sum)?;
            k += 2;
        }
        error = 0.0;
        for (e, s) in estimate.iter_mut().zip(&sum) {
            let next = h * s;
            error = f64::max(error, (next - *e).abs());
            *e = next;
        }
        if level >= 3 && error < tol {
            return Ok(VecIntegral { values: estimate, error, level });
        }
    }
    Err(Error::NoConvergence {
        func: "integrate_de_vec",
        detail: format!("component change {error:e} above tolerance {tol:e} at level {MAX_LEVEL}"),
    })
}
