//! The compactly supported bump `phi(x) = exp(1 / (|x - c|^2 / R^2 - 1))`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{squared_norm, Jet, JetLayout};
use crate::multi_index::MultiIndex;
use crate::operator::Operator;

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    center: Vec<f64>,
    radius: f64,
}

impl TestFunction {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid("radius", "support radius must be positive"));
        }
        if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("center", "coordinates must be finite"));
        }
        Ok(TestFunction { center, radius })
    }

    /// Bump centred at the origin of `R^n`.
    pub fn centered(n: usize, radius: f64) -> Result<Self> {
        Self::new(vec![0.0; n], radius)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn scaled_sq(&self, x: &[f64]) -> f64 {
        self.center
            .iter()
            .zip(x)
            .map(|(c, v)| ((v - c) / self.radius).powi(2))
            .sum()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let s = self.scaled_sq(x);
        if s < 1.0 {
            (1.0 / (s - 1.0)).exp()
        } else {
            0.0
        }
    }

    /// Taylor jet at `x`; identically zero outside the support.
    pub fn jet(&self, x: &[f64], degree: u32) -> Jet<f64> {
        let layout = JetLayout::new(self.dim(), degree);
        let s0 = self.scaled_sq(x);
        if s0 >= 1.0 {
            return Jet::constant(&layout, 0.0);
        }
        // Derivatives of g(s) = exp(1/(s - 1)) at s0 from a one-variable jet.
        let line = JetLayout::new(1, degree);
        let g = Jet::variable(&line, 0, s0).add_constant(-1.0).recip().exp();
        let dg: Vec<f64> = (0..=degree)
            .map(|p| g.derivative(&MultiIndex::new(vec![p])))
            .collect();
        let vars: Vec<Jet<f64>> = Jet::variables(&layout, x)
            .into_iter()
            .zip(&self.center)
            .map(|(v, &c)| v.add_constant(-c).scale(1.0 / self.radius))
            .collect();
        squared_norm(&vars).compose(&dg)
    }

    /// `(L phi)(x) = sum_alpha a_alpha d^alpha phi(x)`.
    pub fn apply(&self, a: &Operator<f64>, x: &[f64]) -> f64 {
        let jet = self.jet(x, a.order());
        a.coefficients()
            .iter()
            .map(|(alpha, c)| c * jet.derivative(alpha))
            .sum()
    }

    /// Shared layout helper for callers that evaluate many jets of one degree.
    pub fn layout(&self, degree: u32) -> Arc<JetLayout> {
        JetLayout::new(self.dim(), degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn values_and_support() {
        let phi = TestFunction::centered(2, 2.0).unwrap();
        assert_relative_eq!(phi.value(&[0.0, 0.0]), (-1.0f64).exp());
        assert_eq!(phi.value(&[2.0, 0.0]), 0.0);
        assert_eq!(
            phi.jet(&[3.0, 0.0], 4)
                .derivative(&MultiIndex::new(vec![2, 2])),
            0.0
        );
        assert!(TestFunction::centered(2, 0.0).is_err());
    }

    #[test]
    fn jet_matches_differences() {
        let phi = TestFunction::new(vec![0.1, -0.2, 0.0], 1.5).unwrap();
        let x = [0.4, 0.3, -0.5];
        let jet = phi.jet(&x, 2);
        let h = 1e-4;
        for axis in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[axis] += h;
            xm[axis] -= h;
            let d1 = (phi.value(&xp) - phi.value(&xm)) / (2.0 * h);
            let d2 = (phi.value(&xp) - 2.0 * phi.value(&x) + phi.value(&xm)) / (h * h);
            let e = MultiIndex::unit(3, axis);
            assert_relative_eq!(jet.derivative(&e), d1, max_relative = 1e-6);
            assert_relative_eq!(jet.derivative(&e.raised(axis)), d2, max_relative = 1e-5);
        }
    }

    #[test]
    fn laplacian_integrates_to_zero() {
        // int Delta phi = 0 for compact support, by a fine tensor midpoint rule.
        let phi = TestFunction::centered(2, 1.0).unwrap();
        let lap = Operator::laplacian(2);
        let m = 400;
        let h = 2.0 / m as f64;
        let mut total = 0.0;
        for i in 0..m {
            for j in 0..m {
                let x = [-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h];
                total += phi.apply(&lap, &x) * h * h;
            }
        }
        assert!(total.abs() < 1e-8, "{total}");
    }
}
