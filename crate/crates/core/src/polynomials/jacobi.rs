//! Classical Jacobi polynomials `P_n^{(a,b)}(g)` for arbitrary real `a`, `b`.

use std::ops::{Add, Mul, Neg, Sub};

/// Jacobi superscripts. Any finite values are allowed, including the negative
/// ones that appear in the exceptional construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub a: f64,
    pub b: f64,
}

impl JacobiParams {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    fn shifted(self, by: f64) -> Self {
        Self::new(self.a + by, self.b + by)
    }
}

// Below this the three-term recurrence divides by (nearly) zero and we fall
// back to the explicit sum.
const RECURRENCE_GUARD: f64 = 1e-3;

/// `P_n^{(a,b)}(g)`, with `P_n = 0` for negative `n`.
///
/// Uses the forward three-term recurrence, which keeps full accuracy up to
/// the degrees needed by the coherent states (the explicit sum cancels badly
/// there). Whenever a recurrence denominator `n + a + b` or `2n + a + b - 2`
/// gets close to zero the explicit binomial sum is used instead; it is exact
/// as a polynomial identity for every `a`, `b`.
pub fn jacobi_p(n: i32, p: JacobiParams, g: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    if n == 0 {
        return 1.0;
    }
    let (a, b) = (p.a, p.b);
    let degenerate = (2..=n).any(|k| {
        let k = k as f64;
        (k + a + b).abs() < RECURRENCE_GUARD || (2.0 * k + a + b - 2.0).abs() < RECURRENCE_GUARD
    });
    if degenerate {
        return jacobi_p_sum(n, p, g);
    }

    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * g;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let lhs = 2.0 * k * (k + a + b) * (c - 2.0);
        let r1 = (c - 1.0) * (c * (c - 2.0) * g + a * a - b * b);
        let r2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let next = (r1 * cur - r2 * prev) / lhs;
        prev = cur;
        cur = next;
    }
    cur
}

/// Explicit finite sum
/// `sum_k C(n+a, n-k) C(n+b, k) ((g-1)/2)^k ((g+1)/2)^(n-k)`.
///
/// Binomials with real upper argument are falling-factorial products, so the
/// sum is well defined for every real `a`, `b`.
pub fn jacobi_p_sum(n: i32, p: JacobiParams, g: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let n = n as usize;
    let lo = 0.5 * (g - 1.0);
    let hi = 0.5 * (g + 1.0);
    let ca = binomials(n as f64 + p.a, n);
    let cb = binomials(n as f64 + p.b, n);
    let mut sum = 0.0;
    for k in 0..=n {
        sum += ca[n - k] * cb[k] * lo.powi(k as i32) * hi.powi((n - k) as i32);
    }
    sum
}

/// `[C(top, 0), C(top, 1), ..., C(top, kmax)]` for real `top`.
fn binomials(top: f64, kmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut c = 1.0;
    out.push(c);
    for k in 1..=kmax {
        c *= (top - (k as f64 - 1.0)) / k as f64;
        out.push(c);
    }
    out
}

/// Derivative of order `order` (0, 1 or 2) through
/// `d/dg P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}`.
pub fn jacobi_p_deriv(n: i32, p: JacobiParams, g: f64, order: u32) -> f64 {
    let mut factor = 1.0;
    for i in 0..order as i32 {
        factor *= 0.5 * (n as f64 + p.a + p.b + 1.0 + i as f64);
    }
    if factor == 0.0 {
        return 0.0;
    }
    factor * jacobi_p(n - order as i32, p.shifted(order as f64), g)
}

/// Value together with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn constant(v: f64) -> Self {
        Self { v, d1: 0.0, d2: 0.0 }
    }

    /// The identity function at `g`.
    pub const fn variable(g: f64) -> Self {
        Self { v: g, d1: 1.0, d2: 0.0 }
    }

    pub fn scale(self, c: f64) -> Self {
        Self { v: c * self.v, d1: c * self.d1, d2: c * self.d2 }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.v;
        let inv2 = inv * inv;
        Self {
            v: inv,
            d1: -self.d1 * inv2,
            d2: (2.0 * self.d1 * self.d1 * inv - self.d2) * inv2,
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

pub fn jacobi_jet(n: i32, p: JacobiParams, g: f64) -> Jet {
    Jet {
        v: jacobi_p(n, p, g),
        d1: jacobi_p_deriv(n, p, g, 1),
        d2: jacobi_p_deriv(n, p, g, 2),
    }
}
