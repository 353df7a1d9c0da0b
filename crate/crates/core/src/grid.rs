use crate::error::{Error, Result};

/// Uniform grid of `points` samples on the closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::Parameter(format!("grid range [{lo}, {hi}] is empty")));
        }
        if points < 2 {
            return Err(Error::Parameter(format!("grid needs at least 2 points, got {points}")));
        }
        Ok(Self { lo, hi, points })
    }

    /// Grid covering `fraction` of the symmetric interval `[-half_width, half_width]`.
    pub fn centered(half_width: f64, fraction: f64, points: usize) -> Result<Self> {
        let w = half_width * fraction;
        Self::new(-w, w, points)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }
}

/// Composite trapezoid rule for samples on a uniform grid.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => step * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_hit_both_ends() {
        let g = GridSpec::new(-1.0, 2.0, 7).unwrap();
        let x = g.nodes();
        assert_eq!(x[0], -1.0);
        assert_eq!(x[6], 2.0);
        assert!((x[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(GridSpec::new(1.0, 1.0, 10).is_err());
        assert!(GridSpec::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn trapezoid_linear_is_exact() {
        let g = GridSpec::new(0.0, 2.0, 11).unwrap();
        let v: Vec<f64> = g.nodes().iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((trapezoid(&v, g.step()) - 8.0).abs() < 1e-14);
    }
}
