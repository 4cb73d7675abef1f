//! Constant-coefficient operators `L = sum_alpha a_alpha d^alpha` of order `2k`, their
//! symbols, ellipticity margins and finite-difference application.

mod fd;
mod file;
mod margin;

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::scalar::{lit, Scalar};

pub use fd::{apply_operator_fd, fd_derivative, fornberg_weights, ScalarField};
pub use file::{parse_operator, read_operator, write_operator};
pub use margin::{check_elliptic, ellipticity_margin, DEFAULT_MARGIN_SAMPLES};

/// Coefficient vector `a` of an operator of order `2k` in `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T> {
    n: usize,
    k: u32,
    coeffs: BTreeMap<MultiIndex, T>,
}

impl<T: Scalar> Operator<T> {
    /// Validates and builds an operator. Zero coefficients are dropped.
    pub fn new(
        n: usize,
        k: u32,
        coeffs: impl IntoIterator<Item = (MultiIndex, T)>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(
                "n",
                format!("dimension must be at least 2, got {n}"),
            ));
        }
        if k < 1 {
            return Err(Error::invalid("k", "half-order must be at least 1"));
        }
        let mut map = BTreeMap::new();
        for (alpha, value) in coeffs {
            if alpha.dim() != n {
                return Err(Error::invalid(
                    "coefficients",
                    format!(
                        "multi-index ({alpha}) has {} entries, expected {n}",
                        alpha.dim()
                    ),
                ));
            }
            if alpha.order() > 2 * k {
                return Err(Error::invalid(
                    "coefficients",
                    format!(
                        "multi-index ({alpha}) has order {} > 2k = {}",
                        alpha.order(),
                        2 * k
                    ),
                ));
            }
            if !value.is_finite() {
                return Err(Error::invalid(
                    "coefficients",
                    format!("a_({alpha}) is not finite"),
                ));
            }
            if map.insert(alpha.clone(), value).is_some() {
                return Err(Error::invalid(
                    "coefficients",
                    format!("duplicate multi-index ({alpha})"),
                ));
            }
        }
        map.retain(|_, v| *v != T::zero());
        if !map.keys().any(|a| a.order() == 2 * k) {
            return Err(Error::invalid(
                "coefficients",
                "no nonzero coefficient of top order 2k",
            ));
        }
        Ok(Operator { n, k, coeffs: map })
    }

    /// `sum_i d_i^2` raised to the power `k`, expanded into monomials.
    pub fn polyharmonic(n: usize, k: u32) -> Self {
        let mut coeffs: BTreeMap<MultiIndex, T> = BTreeMap::new();
        coeffs.insert(MultiIndex::zero(n), T::one());
        for _ in 0..k {
            let mut next = BTreeMap::new();
            for (alpha, c) in &coeffs {
                for axis in 0..n {
                    let beta = alpha.raised(axis).raised(axis);
                    *next.entry(beta).or_insert(T::zero()) += *c;
                }
            }
            coeffs = next;
        }
        Operator::new(n, k, coeffs).expect("polyharmonic operator is well formed")
    }

    /// The Laplacian in `n` variables.
    pub fn laplacian(n: usize) -> Self {
        Self::polyharmonic(n, 1)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Half the order.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// The order `2k`.
    pub fn order(&self) -> u32 {
        2 * self.k
    }

    pub fn coefficients(&self) -> &BTreeMap<MultiIndex, T> {
        &self.coeffs
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> T {
        self.coeffs.get(alpha).copied().unwrap_or_else(T::zero)
    }

    /// Copy with `a_alpha` replaced by `value`.
    pub fn with_coefficient(&self, alpha: MultiIndex, value: T) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs.insert(alpha, value);
        Operator::new(self.n, self.k, coeffs)
    }

    /// Copy with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Operator::new(
            self.n,
            self.k,
            self.coeffs.iter().map(|(a, &c)| (a.clone(), c * factor)),
        )
    }

    /// `sum_{|alpha| <= 2k-1} |a_alpha|`.
    pub fn lower_order_mass(&self) -> T {
        self.coeffs
            .iter()
            .filter(|(a, _)| a.order() < 2 * self.k)
            .map(|(_, c)| c.abs())
            .sum()
    }

    /// `max_{|alpha| = 2k} |a_alpha|`.
    pub fn principal_scale(&self) -> T {
        self.coeffs
            .iter()
            .filter(|(a, _)| a.order() == 2 * self.k)
            .fold(T::zero(), |m, (_, c)| m.max(c.abs()))
    }

    /// True when every coefficient has order exactly `2k`.
    pub fn is_homogeneous(&self) -> bool {
        self.coeffs.keys().all(|a| a.order() == 2 * self.k)
    }

    /// The principal part `L_0`, keeping only `|alpha| = 2k`.
    pub fn principal_part(&self) -> Self {
        Operator {
            n: self.n,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(a, _)| a.order() == 2 * self.k)
                .map(|(a, &c)| (a.clone(), c))
                .collect(),
        }
    }

    /// Coefficients with `a_alpha` replaced by `(-1)^{|alpha|} a_alpha`.
    pub fn adjoint(&self) -> Self {
        Operator {
            n: self.n,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, &c)| (a.clone(), if a.order() % 2 == 1 { -c } else { c }))
                .collect(),
        }
    }

    /// `p_d(xi) = sum_{|alpha| = d} a_alpha xi^alpha` for `d = 0..=2k`, so that
    /// `P(z xi) = sum_d p_d(xi) z^d`.
    pub fn homogeneous_parts(&self, xi: &[T]) -> Vec<T> {
        let mut parts = vec![T::zero(); 2 * self.k as usize + 1];
        for (alpha, &c) in &self.coeffs {
            parts[alpha.order() as usize] += c * alpha.monomial(xi);
        }
        parts
    }

    /// Full symbol `P(z xi) = sum_alpha a_alpha (z xi)^alpha` for complex `z`.
    pub fn symbol(&self, z: Complex<T>, xi: &[T]) -> Complex<T> {
        let parts = self.homogeneous_parts(xi);
        parts
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &p| acc * z + p)
    }

    /// Full symbol at a complex point, `sum_alpha a_alpha w^alpha`.
    pub fn symbol_at(&self, w: &[Complex<T>]) -> Complex<T> {
        self.coeffs
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (alpha, &c)| {
                acc + alpha.monomial_complex(w) * c
            })
    }

    /// Principal symbol `P_0(xi)` at a real point.
    pub fn principal_symbol(&self, xi: &[T]) -> T {
        self.coeffs
            .iter()
            .filter(|(a, _)| a.order() == 2 * self.k)
            .map(|(a, &c)| c * a.monomial(xi))
            .sum()
    }

    /// Smallest `l >= 1` with lower-order mass `< l` and margin `> 1/l`.
    pub fn class_index(&self, margin: T) -> u32 {
        let mass = self.lower_order_mass();
        let mut l = 1u32;
        loop {
            let lf: T = lit(l as f64);
            if mass < lf && margin * lf > T::one() {
                return l;
            }
            l += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mi(s: &str) -> MultiIndex {
        s.parse().unwrap()
    }

    #[test]
    fn symbol_examples() {
        let lap = Operator::<f64>::laplacian(2);
        let p = lap.symbol(Complex::new(0.0, 1.0), &[1.0, 0.0]);
        assert_relative_eq!(p.re, -1.0);
        assert_relative_eq!(p.im, 0.0);

        let helm = lap.with_coefficient(mi("0,0"), -1.0).unwrap();
        let p = helm.symbol(Complex::new(2.0, 0.0), &[1.0, 0.0]);
        assert_relative_eq!(p.re, 3.0);

        let bih = Operator::<f64>::polyharmonic(2, 2);
        assert_relative_eq!(bih.coefficient(&mi("2,2")), 2.0);
        let p = bih.symbol(Complex::new(1.0, 1.0), &[1.0, 0.0]);
        assert_relative_eq!(p.re, -4.0, epsilon = 1e-14);
        assert_relative_eq!(p.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Operator::new(2, 1, [(mi("3,0"), 1.0)]).is_err());
        assert!(Operator::new(2, 1, [(mi("1,0"), 1.0)]).is_err());
        assert!(Operator::new(2, 1, [(mi("1,0,1"), 1.0)]).is_err());
        assert!(Operator::new(1, 1, [(mi("2"), 1.0)]).is_err());
        assert!(Operator::new(2, 1, [(mi("2,0"), 0.0), (mi("1,0"), 1.0)]).is_err());
    }

    #[test]
    fn adjoint_flips_odd_orders() {
        let a =
            Operator::new(2, 1, [(mi("2,0"), 1.0), (mi("0,2"), 1.0), (mi("1,0"), 1.0)]).unwrap();
        assert_eq!(a.adjoint().coefficient(&mi("1,0")), -1.0);
        assert_eq!(a.adjoint().coefficient(&mi("2,0")), 1.0);
        assert_eq!(
            Operator::<f64>::laplacian(3).adjoint(),
            Operator::laplacian(3)
        );
    }

    #[test]
    fn class_index_examples() {
        let lap = Operator::<f64>::laplacian(2);
        assert_eq!(lap.class_index(1.0), 2);
        let helm = lap.with_coefficient(mi("0,0"), -4.0).unwrap();
        assert_eq!(helm.class_index(1.0), 5);
        assert_eq!(helm.lower_order_mass(), 4.0);
    }

    #[test]
    fn generic_over_f32() {
        let lap = Operator::<f32>::laplacian(3);
        let p = lap.symbol(Complex::new(0.0, 2.0), &[0.0, 0.6, 0.8]);
        assert!((p.re + 4.0).abs() < 1e-5);
    }

    fn random_operator() -> impl Strategy<Value = Operator<f64>> {
        (1u32..=2, proptest::collection::vec(-2.0f64..2.0, 15)).prop_map(|(k, vals)| {
            let idx = MultiIndex::up_to_order(2, 2 * k);
            let mut coeffs: Vec<(MultiIndex, f64)> = idx
                .into_iter()
                .zip(vals.iter().copied().chain(std::iter::repeat(0.5)))
                .collect();
            // Keep a nonzero top-order coefficient.
            coeffs.last_mut().unwrap().1 = 1.0;
            Operator::new(2, k, coeffs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn principal_symbol_is_homogeneous(
            a in random_operator(),
            zr in -3.0f64..3.0, zi in -3.0f64..3.0, phi in 0.0f64..6.3,
        ) {
            let xi = [phi.cos(), phi.sin()];
            let z = Complex::new(zr, zi);
            let p0 = a.principal_part();
            let lhs = p0.symbol(z, &xi);
            let rhs = z.powi(a.order() as i32) * p0.principal_symbol(&xi);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn adjoint_is_an_involution(a in random_operator()) {
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }

        #[test]
        fn symbol_matches_monomial_sum(a in random_operator(), zr in -2.0f64..2.0, zi in -2.0f64..2.0, phi in 0.0f64..6.3) {
            let xi = [phi.cos(), phi.sin()];
            let z = Complex::new(zr, zi);
            let w = [z * xi[0], z * xi[1]];
            let d = a.symbol(z, &xi) - a.symbol_at(&w);
            prop_assert!(d.norm() <= 1e-11 * (1.0 + a.symbol_at(&w).norm()));
        }
    }
}
