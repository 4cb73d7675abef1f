//! Density samples on boundary nodes and their spectral resampling.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sphere::forward_transform;

use super::boundary::ParamBoundary;
use super::expr::{Expr, PARAM_SLOT};

/// Values of a real density at the nodes of a [`ParamBoundary`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySamples {
    values: Vec<f64>,
}

impl DensitySamples {
    pub fn new(boundary: &ParamBoundary, values: Vec<f64>) -> Result<Self> {
        if values.len() != boundary.len() {
            return Err(Error::invalid(
                "density",
                format!("{} samples for {} nodes", values.len(), boundary.len()),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("density", "samples must be finite"));
        }
        Ok(DensitySamples { values })
    }

    /// Samples of `f(point, param)`.
    pub fn from_fn(boundary: &ParamBoundary, f: impl Fn(&[f64], &[f64]) -> f64) -> Result<Self> {
        let values = (0..boundary.len())
            .map(|i| f(boundary.point(i), boundary.param(i)))
            .collect();
        Self::new(boundary, values)
    }

    /// Samples of an expression in `x1..xn` (and `t` on curves).
    pub fn from_expr(boundary: &ParamBoundary, expr: &Expr) -> Result<Self> {
        let n = boundary.dim();
        if let Some(c) = expr.max_coordinate() {
            if c >= n {
                return Err(Error::invalid(
                    "density",
                    format!("`{}` uses x{} on a boundary in R^{n}", expr.source(), c + 1),
                ));
            }
        }
        if n != 2 && expr.uses_parameter() {
            return Err(Error::invalid(
                "density",
                "the parameter `t` exists only on curves",
            ));
        }
        Self::from_fn(boundary, |x, p| {
            let mut vars = [0.0; 4];
            vars[..n].copy_from_slice(x);
            if n == 2 {
                vars[PARAM_SLOT] = p[0];
            }
            expr.eval(&vars)
        })
    }

    pub fn constant(boundary: &ParamBoundary, value: f64) -> Result<Self> {
        Self::new(boundary, vec![value; boundary.len()])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Interpolates the density from `from` onto the nodes of `to` (same shape): trigonometric
    /// interpolation in the curve parameter, or a spherical-harmonic fit on the ellipsoid chart.
    pub fn resample(&self, from: &ParamBoundary, to: &ParamBoundary) -> Result<Self> {
        if from.shape() != to.shape() || from.center() != to.center() {
            return Err(Error::invalid(
                "boundary",
                "resampling needs the same shape",
            ));
        }
        if self.values.len() != from.len() {
            return Err(Error::invalid(
                "density",
                "sample count differs from node count",
            ));
        }
        if from.resolution() == to.resolution() {
            return Ok(self.clone());
        }
        let values = if from.dim() == 2 {
            let series = Fourier::fit(&self.values);
            (0..to.len()).map(|i| series.eval(to.param(i)[0])).collect()
        } else {
            let rule = from
                .sphere_rule()
                .expect("ellipsoid carries its sphere rule");
            let e = forward_transform(rule, &self.values, rule.order() / 2)?;
            (0..to.len()).map(|i| e.evaluate(to.param(i))).collect()
        };
        Self::new(to, values)
    }
}

/// Real trigonometric interpolant of equispaced samples on `[0, 2 pi)`.
struct Fourier {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Fourier {
    fn fit(samples: &[f64]) -> Self {
        let n = samples.len();
        let half = n / 2;
        let mut cos = vec![0.0; half + 1];
        let mut sin = vec![0.0; half + 1];
        for (k, (ck, sk)) in cos.iter_mut().zip(sin.iter_mut()).enumerate() {
            for (i, &v) in samples.iter().enumerate() {
                // Reduce k * i modulo n to keep the angle small and exact.
                let (s, c) = (2.0 * PI * ((k * i) % n) as f64 / n as f64).sin_cos();
                *ck += v * c;
                *sk += v * s;
            }
            let scale = if k == 0 || (n.is_multiple_of(2) && k == half) {
                1.0
            } else {
                2.0
            };
            *ck *= scale / n as f64;
            *sk *= scale / n as f64;
        }
        Fourier { cos, sin }
    }

    fn eval(&self, t: f64) -> f64 {
        let (s1, c1) = t.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        let mut total = 0.0;
        for (ck, sk) in self.cos.iter().zip(&self.sin) {
            total += ck * c + sk * s;
            (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
        }
        total
    }
}
