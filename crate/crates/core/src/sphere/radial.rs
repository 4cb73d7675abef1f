use rayon::prelude::*;

use crate::scalar::{from_usize, lit, Scalar};

use super::harmonics::forward_transform;
use super::harmonics::Expansion;
use super::quadrature::build_quadrature;

/// `|x|^exponent (log|x|)^{log as u8} angular(x/|x|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<T> {
    pub exponent: T,
    pub log: bool,
    pub angular: Expansion<T>,
}

impl<T: Scalar> Term<T> {
    pub fn new(exponent: T, log: bool, angular: Expansion<T>) -> Self {
        Term {
            exponent,
            log,
            angular,
        }
    }

    pub fn evaluate(&self, x: &[T]) -> T {
        let r = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        let theta: Vec<T> = x.iter().map(|&v| v / r).collect();
        self.radial_factor(r) * self.angular.evaluate(&theta)
    }

    /// `r^m (log r)^q`.
    pub fn radial_factor(&self, r: T) -> T {
        let p = r.powf(self.exponent);
        if self.log {
            p * r.ln()
        } else {
            p
        }
    }
}

/// Sum of [`Term`]s with at most one term per `(exponent, log)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TermSum<T> {
    n: usize,
    terms: Vec<Term<T>>,
}

impl<T: Scalar> TermSum<T> {
    pub fn new(n: usize) -> Self {
        TermSum {
            n,
            terms: Vec::new(),
        }
    }

    pub fn from_term(term: Term<T>) -> Self {
        let mut s = Self::new(term.angular.dim());
        s.push(term);
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term<T>> {
        self.terms
    }

    /// Adds a term, merging it into an existing one with the same exponent and log flag.
    pub fn push(&mut self, term: Term<T>) {
        let tol: T = lit(1e-12);
        if let Some(existing) = self
            .terms
            .iter_mut()
            .find(|t| t.log == term.log && (t.exponent - term.exponent).abs() <= tol)
        {
            existing.angular = existing.angular.add_scaled(&term.angular, T::one());
        } else {
            self.terms.push(term);
        }
    }

    pub fn extend(&mut self, other: TermSum<T>) {
        for t in other.terms {
            self.push(t);
        }
    }

    pub fn evaluate(&self, x: &[T]) -> T {
        let r = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        let theta: Vec<T> = x.iter().map(|&v| v / r).collect();
        self.terms
            .iter()
            .map(|t| t.radial_factor(r) * t.angular.evaluate(&theta))
            .sum()
    }

    /// `d/dx_h` of every term, by `d_h(r^m f) = r^{m-1}(D_h f + m theta_h f)` and the extra
    /// `r^{m-1} theta_h f` from a logarithm. Angular parts are re-projected exactly, one degree
    /// higher.
    pub fn partial(&self, h: usize) -> TermSum<T> {
        let pieces: Vec<Vec<Term<T>>> = self
            .terms
            .par_iter()
            .filter(|t| !t.angular.is_zero())
            .map(|t| partial_term(self.n, t, h))
            .collect();
        let mut out = TermSum::new(self.n);
        for t in pieces.into_iter().flatten() {
            out.push(t);
        }
        out
    }
}

fn partial_term<T: Scalar>(n: usize, t: &Term<T>, h: usize) -> Vec<Term<T>> {
    let angular = t.angular.resized(t.angular.effective_degree());
    let l = angular.degree_max() + 1;
    let rule = build_quadrature::<T>(n, (2 * l).max(8)).expect("supported dimension");
    let m = t.exponent;
    let values: Vec<T> = rule.nodes().map(|x| angular.evaluate(x)).collect();
    let main: Vec<T> = rule
        .nodes()
        .zip(&values)
        .map(|(x, &v)| angular.gunter_derivative(x, h) + m * x[h] * v)
        .collect();
    let main = forward_transform(&rule, &main, l).expect("rule order covers the degree");
    let mut out = vec![Term::new(m - T::one(), t.log, main)];
    if t.log {
        let extra: Vec<T> = rule.nodes().zip(&values).map(|(x, &v)| x[h] * v).collect();
        let extra = forward_transform(&rule, &extra, l).expect("rule order covers the degree");
        out.push(Term::new(m - T::one(), false, extra));
    }
    out
}

/// `Delta` applied to one term through the Laplace–Beltrami eigenvalues:
/// `Delta(r^m Y_l) = (m(m+n-2) - l(l+n-2)) r^{m-2} Y_l` and, with a logarithm, the extra
/// `(2m+n-2) r^{m-2} Y_l`.
pub fn radial_laplacian_step<T: Scalar>(term: &Term<T>) -> TermSum<T> {
    let n = term.angular.dim();
    let nf: T = from_usize(n);
    let two: T = lit(2.0);
    let m = term.exponent;
    let eigen = |l: usize| {
        let lf: T = from_usize(l);
        m * (m + nf - two) - lf * (lf + nf - two)
    };
    let mut out = TermSum::new(n);
    out.push(Term::new(
        m - two,
        term.log,
        term.angular.map_degrees(eigen),
    ));
    if term.log {
        out.push(Term::new(
            m - two,
            false,
            term.angular.scale(two * m + nf - two),
        ));
    }
    out
}

/// `Delta^p` applied to a sum of terms.
pub fn iterated_laplacian<T: Scalar>(sum: &TermSum<T>, p: usize) -> TermSum<T> {
    let mut current = sum.clone();
    for _ in 0..p {
        let mut next = TermSum::new(current.dim());
        for t in current.terms() {
            next.extend(radial_laplacian_step(t));
        }
        current = next;
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn constant_term(n: usize, m: f64, log: bool, c: f64) -> Term<f64> {
        Term::new(m, log, Expansion::constant(n, c))
    }

    #[test]
    fn laplacian_examples() {
        let s = radial_laplacian_step(&constant_term(2, 2.0, false, 1.0));
        assert_eq!(s.terms().len(), 1);
        assert_relative_eq!(s.evaluate(&[0.3, 0.4]), 4.0, epsilon = 1e-13);

        let s = radial_laplacian_step(&constant_term(2, 0.0, true, 1.0));
        assert!(s.terms().iter().all(|t| t.angular.norm() < 1e-15));

        let s = radial_laplacian_step(&constant_term(2, 2.0, true, 1.0));
        let r: f64 = 0.7;
        assert_relative_eq!(s.evaluate(&[r, 0.0]), 4.0 * r.ln() + 4.0, epsilon = 1e-13);
    }

    #[test]
    fn biharmonic_of_cubic_in_3d() {
        let s = iterated_laplacian(&TermSum::from_term(constant_term(3, 3.0, false, 1.0)), 2);
        assert_eq!(s.terms().len(), 1);
        assert_relative_eq!(s.terms()[0].exponent, -1.0);
        assert_relative_eq!(s.evaluate(&[0.0, 0.0, 2.0]), 12.0, epsilon = 1e-12);

        let s = radial_laplacian_step(&constant_term(3, -1.0, false, 1.0));
        assert!(s.terms()[0].angular.norm() < 1e-15);
    }

    #[test]
    fn exponent_structure_is_preserved() {
        let mut sum = TermSum::new(3);
        sum.push(constant_term(3, 5.0, false, 1.0));
        sum.push(constant_term(3, 6.0, false, 1.0));
        sum.push(constant_term(3, 5.0, false, 2.0));
        assert_eq!(sum.terms().len(), 2);
        let out = iterated_laplacian(&sum, 2);
        let exps: Vec<f64> = out.terms().iter().map(|t| t.exponent).collect();
        assert_eq!(exps, [1.0, 2.0]);
    }

    #[test]
    fn partial_derivative_of_log_radius() {
        // d_1 log r = x_1 / r^2
        let s = TermSum::from_term(constant_term(2, 0.0, true, 1.0)).partial(0);
        let x = [0.3, -0.5];
        assert_relative_eq!(s.evaluate(&x), 0.3 / 0.34, epsilon = 1e-12);
        // d_3 of r^{-1} in 3D.
        let s = TermSum::from_term(constant_term(3, -1.0, false, 1.0)).partial(2);
        let x = [0.2, 0.1, 0.4];
        let r = 0.21f64.sqrt();
        assert_relative_eq!(s.evaluate(&x), -0.4 / r.powi(3), epsilon = 1e-12);
    }
}
