//! Truncated multivariate Taylor polynomials for exact derivatives of closed-form functions.
//!
//! A [`Jet`] holds the Taylor coefficients `c_alpha` of a function at a base point, for all
//! `|alpha| <= degree`; the partial derivative is `d^alpha f = alpha! c_alpha`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::multi_index::MultiIndex;
use crate::scalar::{factorial, from_usize, Scalar};

/// Shared indexing data for jets of a given dimension and degree.
#[derive(Debug)]
pub struct JetLayout {
    n: usize,
    degree: u32,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    /// For each slot, pairs `(i, j)` of slots whose product lands in it.
    products: Vec<Vec<(usize, usize)>>,
}

impl JetLayout {
    pub fn new(n: usize, degree: u32) -> Arc<Self> {
        let indices = MultiIndex::up_to_order(n, degree);
        let lookup: HashMap<MultiIndex, usize> = indices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        let mut products = vec![Vec::new(); indices.len()];
        for (i, a) in indices.iter().enumerate() {
            for (j, b) in indices.iter().enumerate() {
                if a.order() + b.order() <= degree {
                    let sum = MultiIndex::new(
                        a.entries()
                            .iter()
                            .zip(b.entries())
                            .map(|(x, y)| x + y)
                            .collect(),
                    );
                    products[lookup[&sum]].push((i, j));
                }
            }
        }
        Arc::new(JetLayout {
            n,
            degree,
            indices,
            lookup,
            products,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Truncated Taylor expansion at a point.
#[derive(Debug, Clone)]
pub struct Jet<T> {
    layout: Arc<JetLayout>,
    coeffs: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    pub fn constant(layout: &Arc<JetLayout>, value: T) -> Self {
        let mut coeffs = vec![T::zero(); layout.len()];
        coeffs[0] = value;
        Jet {
            layout: layout.clone(),
            coeffs,
        }
    }

    /// The coordinate function `x_axis` expanded at `base`.
    pub fn variable(layout: &Arc<JetLayout>, axis: usize, base: T) -> Self {
        let mut j = Self::constant(layout, base);
        if layout.degree > 0 {
            j.coeffs[layout.lookup[&MultiIndex::unit(layout.n, axis)]] = T::one();
        }
        j
    }

    /// All coordinate functions at `x`.
    pub fn variables(layout: &Arc<JetLayout>, x: &[T]) -> Vec<Self> {
        x.iter()
            .enumerate()
            .map(|(axis, &v)| Self::variable(layout, axis, v))
            .collect()
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    /// Taylor coefficient `c_alpha`.
    pub fn coefficient(&self, alpha: &MultiIndex) -> T {
        self.layout
            .lookup
            .get(alpha)
            .map_or_else(T::zero, |&i| self.coeffs[i])
    }

    /// Partial derivative `d^alpha` at the base point (zero beyond the jet degree).
    pub fn derivative(&self, alpha: &MultiIndex) -> T {
        self.coefficient(alpha) * alpha.factorial::<T>()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|a| a * s)
    }

    pub fn add_constant(&self, c: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let coeffs = self
            .layout
            .products
            .iter()
            .map(|pairs| {
                pairs.iter().fold(T::zero(), |acc, &(i, j)| {
                    acc + self.coeffs[i] * other.coeffs[j]
                })
            })
            .collect();
        Jet {
            layout: self.layout.clone(),
            coeffs,
        }
    }

    /// `f(self)` for a univariate `f` given its derivatives `f^(p)(c)`, `p = 0..=degree`, at the
    /// constant term `c`.
    pub fn compose(&self, derivatives: &[T]) -> Self {
        let d = self.layout.degree as usize;
        assert!(
            derivatives.len() > d,
            "need derivatives up to the jet degree"
        );
        let mut eps = self.clone();
        eps.coeffs[0] = T::zero();
        let mut out = Self::constant(&self.layout, derivatives[0]);
        let mut power = Self::constant(&self.layout, T::one());
        for (p, &dp) in derivatives.iter().enumerate().take(d + 1).skip(1) {
            power = power.mul(&eps);
            out = out.add(&power.scale(dp / factorial::<T>(p)));
        }
        out
    }

    pub fn recip(&self) -> Self {
        let c = self.value();
        let mut ds = Vec::with_capacity(self.layout.degree as usize + 1);
        let mut v = T::one() / c;
        for p in 0..=self.layout.degree as usize {
            ds.push(v);
            v = -v * from_usize::<T>(p + 1) / c;
        }
        self.compose(&ds)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&vec![e; self.layout.degree as usize + 1])
    }

    pub fn ln(&self) -> Self {
        let c = self.value();
        let mut ds = vec![c.ln()];
        let mut v = T::one() / c;
        for p in 1..=self.layout.degree as usize {
            ds.push(v);
            v = -v * from_usize::<T>(p) / c;
        }
        self.compose(&ds)
    }

    /// `self^s` for real `s` (constant term must be positive unless `s` is a whole number).
    pub fn powf(&self, s: T) -> Self {
        let c = self.value();
        let mut ds = Vec::with_capacity(self.layout.degree as usize + 1);
        let mut coef = T::one();
        for p in 0..=self.layout.degree as usize {
            ds.push(coef * c.powf(s - from_usize(p)));
            coef *= s - from_usize(p);
        }
        self.compose(&ds)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(T::from_f64(0.5).unwrap())
    }

    fn zip(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        Jet {
            layout: self.layout.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn map(&self, f: impl Fn(T) -> T) -> Self {
        Jet {
            layout: self.layout.clone(),
            coeffs: self.coeffs.iter().map(|&a| f(a)).collect(),
        }
    }
}

/// `sum_i x_i^2` as a jet.
pub fn squared_norm<T: Scalar>(vars: &[Jet<T>]) -> Jet<T> {
    let mut acc = vars[0].mul(&vars[0]);
    for v in &vars[1..] {
        acc = acc.add(&v.mul(v));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule_and_exp() {
        let layout = JetLayout::new(2, 3);
        let v = Jet::variables(&layout, &[0.5f64, -0.3]);
        // f = exp(x y)
        let f = v[0].mul(&v[1]).exp();
        let (x, y) = (0.5f64, -0.3f64);
        let e = (x * y).exp();
        assert_relative_eq!(
            f.derivative(&"1,0".parse().unwrap()),
            y * e,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            f.derivative(&"1,1".parse().unwrap()),
            e * (1.0 + x * y),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            f.derivative(&"2,1".parse().unwrap()),
            e * (2.0 * y + x * y * y),
            epsilon = 1e-13
        );
        assert_eq!(f.derivative(&"3,1".parse().unwrap()), 0.0);
    }

    #[test]
    fn log_and_power_of_radius() {
        let layout = JetLayout::new(2, 4);
        let v = Jet::variables(&layout, &[1.0f64, 0.0]);
        let r2 = squared_norm(&v);
        // log|x| = ln(r2)/2 is harmonic.
        let lg = r2.ln().scale(0.5);
        let lap = lg.derivative(&"2,0".parse().unwrap()) + lg.derivative(&"0,2".parse().unwrap());
        assert!(lap.abs() < 1e-14);
        // Biharmonic r^2 log r: fourth derivatives sum to zero.
        let b = r2.mul(&lg);
        let bih = b.derivative(&"4,0".parse().unwrap())
            + 2.0 * b.derivative(&"2,2".parse().unwrap())
            + b.derivative(&"0,4".parse().unwrap());
        assert!(bih.abs() < 1e-12);
        // 1/r in 3D via powf.
        let l3 = JetLayout::new(3, 2);
        let w = Jet::variables(&l3, &[0.3f64, 0.4, 1.2]);
        let inv = squared_norm(&w).powf(-0.5);
        let lap3: f64 = ["2,0,0", "0,2,0", "0,0,2"]
            .iter()
            .map(|a| inv.derivative(&a.parse().unwrap()))
            .sum();
        assert!(lap3.abs() < 1e-13);
        let rec = squared_norm(&w).recip();
        assert_relative_eq!(rec.value(), 1.0 / 1.69, epsilon = 1e-15);
    }
}
