//! Series form of the fundamental solution
//!
//! ```text
//! S(x) = sum_{j=0}^{J} |x|^{2k-n+j} f_j(x/|x|) + log|x| sum_alpha b_alpha x^alpha
//! ```
//!
//! For odd `n`, `S = Delta^{(n+1)/2} W_0`; for even `n`, `S = Delta^{n/2} (W_1 + W_2)`.
//! Expanding the plane-wave kernel `v` in powers of `x.xi - t` turns each order `j` into
//! `|x|^m` times a zonal sphere integral of `a_j`, evaluated degree by degree with Funk–Hecke
//! multipliers, after which the Laplacians act on `r^m Y_l` through their eigenvalues.
//!
//! The smooth remainder is not split off. `W_2` only contributes homogeneous polynomials
//! `-H_j B_j(x)`, which fall into the same `f_j` as everything else, so the table represents
//! `S` itself rather than a particular `A + log B + C` decomposition.

mod build;
mod direct;
mod io;
mod monomial;

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::operator::Operator;
use crate::scalar::{harmonic_number, sphere_area};
use crate::sphere::{basis_values, Expansion, Term, TermSum};

pub use build::{build_table, build_table_with, BuildOptions};
pub use direct::{compute_w0, compute_w1, compute_w2, direct_rule, plane_wave_constant};
pub use io::{read_table, table_from_json, table_to_json, write_table, TABLE_SCHEMA_VERSION};
pub use monomial::harmonic_to_monomials;

/// Tolerance on the truncation tail that defines the validity radius.
pub const VALIDITY_TOLERANCE: f64 = 1e-10;

/// Truncated series of `S` for one operator. Immutable after construction; derivative series
/// are computed on first use and cached.
#[derive(Debug)]
pub struct FundamentalSolutionTable {
    pub(crate) a: Operator<f64>,
    pub(crate) jmax: usize,
    pub(crate) degree: usize,
    pub(crate) f: Vec<Expansion<f64>>,
    /// Angular parts of the logarithmic terms, `log|x| |x|^{2k-n+j} g_j`; empty for odd `n`.
    pub(crate) g: Vec<Expansion<f64>>,
    pub(crate) b: BTreeMap<MultiIndex, f64>,
    pub(crate) tail: TailModel,
    pub(crate) r_valid: f64,
    pub(crate) parity_checked: bool,
    pub(crate) parity_defect: f64,
    derivatives: RwLock<BTreeMap<MultiIndex, Arc<TermSum<f64>>>>,
}

impl Clone for FundamentalSolutionTable {
    fn clone(&self) -> Self {
        FundamentalSolutionTable {
            a: self.a.clone(),
            jmax: self.jmax,
            degree: self.degree,
            f: self.f.clone(),
            g: self.g.clone(),
            b: self.b.clone(),
            tail: self.tail,
            r_valid: self.r_valid,
            parity_checked: self.parity_checked,
            parity_defect: self.parity_defect,
            derivatives: RwLock::new(BTreeMap::new()),
        }
    }
}

impl PartialEq for FundamentalSolutionTable {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.jmax == other.jmax
            && self.degree == other.degree
            && self.f == other.f
            && self.g == other.g
            && self.b == other.b
            && self.tail == other.tail
            && self.r_valid.to_bits() == other.r_valid.to_bits()
            && self.parity_checked == other.parity_checked
            && self.parity_defect.to_bits() == other.parity_defect.to_bits()
    }
}

impl FundamentalSolutionTable {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        a: Operator<f64>,
        jmax: usize,
        degree: usize,
        f: Vec<Expansion<f64>>,
        g: Vec<Expansion<f64>>,
        b: BTreeMap<MultiIndex, f64>,
        tail: TailModel,
        r_valid: f64,
        parity_checked: bool,
        parity_defect: f64,
    ) -> Self {
        FundamentalSolutionTable {
            a,
            jmax,
            degree,
            f,
            g,
            b,
            tail,
            r_valid,
            parity_checked,
            parity_defect,
            derivatives: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn operator(&self) -> &Operator<f64> {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn k(&self) -> u32 {
        self.a.k()
    }

    /// Highest series index `J`.
    pub fn jmax(&self) -> usize {
        self.jmax
    }

    /// Harmonic truncation degree used during assembly.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `f_0, ..., f_J`.
    pub fn f(&self) -> &[Expansion<f64>] {
        &self.f
    }

    /// Angular form of the logarithmic polynomial, one entry per series index (even `n`).
    pub fn log_harmonics(&self) -> &[Expansion<f64>] {
        &self.g
    }

    /// `b_alpha`, nonzero entries only; empty for odd `n`.
    pub fn b(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.b
    }

    /// Exponent `2k - n` of the leading term.
    pub fn leading_exponent(&self) -> i64 {
        2 * self.a.k() as i64 - self.a.dim() as i64
    }

    /// Largest radius at which [`remainder_bound`](Self::remainder_bound) stays below
    /// [`VALIDITY_TOLERANCE`]; infinite when the series terminates (homogeneous operators).
    pub fn r_valid(&self) -> f64 {
        self.r_valid
    }

    pub fn class_index(&self) -> u32 {
        self.tail.class_index
    }

    pub fn parity_checked(&self) -> bool {
        self.parity_checked
    }

    /// Largest relative wrong-parity mass removed from any `f_j` during assembly.
    pub fn parity_defect(&self) -> f64 {
        self.parity_defect
    }

    /// Estimate of the omitted terms `j > J` at radius `r`, from the class bound on `a_j`.
    pub fn remainder_bound(&self, r: f64) -> f64 {
        self.tail.remainder(self.jmax, r)
    }

    /// `S(x)`.
    pub fn eval_s(&self, x: &[f64]) -> Result<f64> {
        let (r, theta) = self.checked_point(x)?;
        let basis = basis_values(self.dim(), self.max_degree(), &theta);
        let lead = self.leading_exponent() as i32;
        let mut total = horner(r, self.f.iter().map(|e| dot(e, &basis)));
        if !self.g.is_empty() {
            total += r.ln() * horner(r, self.g.iter().map(|e| dot(e, &basis)));
        }
        Ok(r.powi(lead) * total)
    }

    /// `S_0(x) = |x|^{2k-n} f_0(x/|x|) + log|x| sum_{|alpha| = 2k-n} b_alpha x^alpha`, the
    /// fundamental solution of the principal part. Defined for every `x != 0`.
    pub fn eval_s0(&self, x: &[f64]) -> Result<f64> {
        let (r, theta) = self.unit_split(x)?;
        let lead = self.leading_exponent() as i32;
        let mut value = self.f[0].evaluate(&theta);
        if let Some(g0) = self.g.first() {
            value += r.ln() * g0.evaluate(&theta);
        }
        Ok(r.powi(lead) * value)
    }

    /// `d^beta S(x)` for `|beta| <= 2k - 1`, by term-wise differentiation of the series.
    pub fn eval_s_derivative(&self, x: &[f64], beta: &MultiIndex) -> Result<f64> {
        if beta.dim() != self.dim() {
            return Err(Error::invalid("beta", "multi-index length differs from n"));
        }
        if beta.order() >= 2 * self.k() {
            return Err(Error::invalid(
                "beta",
                "derivative order must be at most 2k - 1",
            ));
        }
        let (r, theta) = self.checked_point(x)?;
        let series = self.derivative_series(beta);
        Ok(evaluate_sum(&series, r, &theta))
    }

    /// The series of `d^beta S` as radial terms, cached per `beta`.
    pub fn derivative_series(&self, beta: &MultiIndex) -> Arc<TermSum<f64>> {
        if let Some(s) = self.derivatives.read().expect("cache lock").get(beta) {
            return s.clone();
        }
        // Differentiate along the axes of beta one at a time, reusing cached prefixes.
        let mut current = Arc::new(self.term_sum());
        let mut partial = MultiIndex::zero(self.dim());
        for (axis, &count) in beta.entries().iter().enumerate() {
            for _ in 0..count {
                partial = partial.raised(axis);
                let cached = self
                    .derivatives
                    .read()
                    .expect("cache lock")
                    .get(&partial)
                    .cloned();
                current = match cached {
                    Some(s) => s,
                    None => {
                        let next = Arc::new(current.partial(axis));
                        self.derivatives
                            .write()
                            .expect("cache lock")
                            .insert(partial.clone(), next.clone());
                        next
                    }
                };
            }
        }
        current
    }

    /// The table as a sum of radial terms.
    pub fn term_sum(&self) -> TermSum<f64> {
        let lead = self.leading_exponent() as f64;
        let mut sum = TermSum::new(self.dim());
        for (j, fj) in self.f.iter().enumerate() {
            sum.push(Term::new(lead + j as f64, false, fj.clone()));
        }
        for (j, gj) in self.g.iter().enumerate() {
            sum.push(Term::new(lead + j as f64, true, gj.clone()));
        }
        sum
    }

    /// `sum_alpha b_alpha x^alpha`.
    pub fn log_polynomial(&self, x: &[f64]) -> f64 {
        self.b.iter().map(|(alpha, &c)| c * alpha.monomial(x)).sum()
    }

    fn max_degree(&self) -> usize {
        self.f
            .iter()
            .chain(&self.g)
            .map(|e| e.degree_max())
            .max()
            .unwrap_or(0)
    }

    fn unit_split(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        if x.len() != self.dim() {
            return Err(Error::invalid(
                "x",
                format!("expected {} coordinates", self.dim()),
            ));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("x", "coordinates must be finite"));
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r == 0.0 {
            return Err(Error::invalid("x", "the series is singular at the origin"));
        }
        Ok((r, x.iter().map(|v| v / r).collect()))
    }

    fn checked_point(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (r, theta) = self.unit_split(x)?;
        if r > self.r_valid {
            return Err(Error::OutsideValidity {
                radius: r,
                valid: self.r_valid,
            });
        }
        Ok((r, theta))
    }
}

/// `S(x)` from a table.
pub fn eval_s(table: &FundamentalSolutionTable, x: &[f64]) -> Result<f64> {
    table.eval_s(x)
}

/// `S_0(x)` from a table.
pub fn eval_s0(table: &FundamentalSolutionTable, x: &[f64]) -> Result<f64> {
    table.eval_s0(x)
}

/// `d^beta S(x)` from a table.
pub fn eval_s_derivative(
    table: &FundamentalSolutionTable,
    x: &[f64],
    beta: &MultiIndex,
) -> Result<f64> {
    table.eval_s_derivative(x, beta)
}

fn dot(e: &Expansion<f64>, basis: &[f64]) -> f64 {
    e.coefficients().iter().zip(basis).map(|(c, b)| c * b).sum()
}

/// `sum_j r^j c_j`.
fn horner(r: f64, coeffs: impl DoubleEndedIterator<Item = f64>) -> f64 {
    coeffs.rev().fold(0.0, |acc, c| acc * r + c)
}

/// Value of a term sum with one shared basis evaluation.
pub(crate) fn evaluate_sum(sum: &TermSum<f64>, r: f64, theta: &[f64]) -> f64 {
    let degree = sum
        .terms()
        .iter()
        .map(|t| t.angular.degree_max())
        .max()
        .unwrap_or(0);
    let basis = basis_values(sum.dim(), degree, theta);
    let ln = r.ln();
    sum.terms()
        .iter()
        .map(|t| {
            let radial = r.powf(t.exponent);
            let radial = if t.log { radial * ln } else { radial };
            radial * dot(&t.angular, &basis)
        })
        .sum()
}

/// Majorant for the omitted terms, built from the class bound `|a_j| <= l (1+l^2)^{j+1-2k}`
/// propagated through the zonal integral and the Laplacian eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TailModel {
    pub n: usize,
    pub k: u32,
    pub class_index: u32,
    pub degree: usize,
    /// The series terminates: `a_j = 0` for `j > 2k`.
    pub exact: bool,
}

impl TailModel {
    /// `log` of the bound on `sup |f_j|`.
    fn ln_coefficient(&self, j: usize) -> f64 {
        let (n, k) = (self.n, self.k as usize);
        let l = self.class_index.max(1) as f64;
        let ja = 2 * k + j;
        let ln_a = l.ln() + (j as f64 + 1.0) * (1.0 + l * l).ln();
        let ln_c = plane_wave_constant(n).abs().ln() + sphere_area::<f64>(n).ln();
        let big = (self.degree * (self.degree + n - 2)) as f64;
        let nf = n as f64;
        let eig = |m: f64| (m * (m + nf - 2.0)).abs() + big;
        if n % 2 == 1 {
            let m = (ja + 1) as f64;
            let steps: f64 = (0..n.div_ceil(2))
                .map(|i| eig(m - 2.0 * i as f64).ln())
                .sum();
            ln_c + ln_a - ln_factorial(ja + 1) + steps
        } else {
            let m = ja as f64;
            let steps: f64 = (0..n / 2)
                .map(|i| {
                    let mi = m - 2.0 * i as f64;
                    (eig(mi) + 2.0 * mi + nf).ln()
                })
                .sum();
            ln_c + ln_a - ln_factorial(ja) + (2.0 + harmonic_number::<f64>(ja)).ln() + steps
        }
    }

    pub fn remainder(&self, jmax: usize, r: f64) -> f64 {
        if self.exact || r <= 0.0 {
            return 0.0;
        }
        let lead = 2.0 * self.k as f64 - self.n as f64;
        let log_factor = if self.n.is_multiple_of(2) {
            1.0 + r.ln().abs()
        } else {
            1.0
        };
        let mut total = 0.0;
        let mut previous = f64::INFINITY;
        for j in jmax + 1..jmax + 2000 {
            let term = (self.ln_coefficient(j) + (lead + j as f64) * r.ln()).exp();
            total += term;
            if j > jmax + 10 && term < previous && term <= 1e-17 * total {
                break;
            }
            previous = term;
        }
        total * log_factor
    }

    /// Largest `r` with `remainder(jmax, r) < tol`.
    pub fn valid_radius(&self, jmax: usize, tol: f64) -> f64 {
        if self.exact {
            return f64::INFINITY;
        }
        let (mut lo, mut hi) = (1e-6f64.ln(), 1e4f64.ln());
        if self.remainder(jmax, hi.exp()) < tol {
            return hi.exp();
        }
        if self.remainder(jmax, lo.exp()) >= tol {
            return 0.0;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.remainder(jmax, mid.exp()) < tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo.exp()
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_model_is_monotone_and_shrinks_with_order() {
        let t = TailModel {
            n: 3,
            k: 1,
            class_index: 2,
            degree: 16,
            exact: false,
        };
        assert!(t.remainder(40, 0.5) < t.remainder(40, 1.0));
        assert!(t.remainder(60, 1.0) < t.remainder(40, 1.0));
        let r40 = t.valid_radius(40, 1e-10);
        let r80 = t.valid_radius(80, 1e-10);
        assert!(r80 > r40 && r40 > 0.1);
        assert!(t.remainder(40, r40) <= 1e-10 * 1.0001);
        let exact = TailModel { exact: true, ..t };
        assert_eq!(exact.valid_radius(40, 1e-10), f64::INFINITY);
        assert_eq!(exact.remainder(40, 5.0), 0.0);
    }

    #[test]
    fn horner_matches_direct_sum() {
        let c = [1.0, -2.0, 0.5, 3.0];
        let r: f64 = 0.7;
        let direct: f64 = c
            .iter()
            .enumerate()
            .map(|(j, v)| v * r.powi(j as i32))
            .sum();
        assert!((horner(r, c.iter().copied()) - direct).abs() < 1e-15);
    }
}
