//! One-dimensional Gauss–Legendre rules, plain and graded toward an endpoint.

use crate::scalar::{from_usize, lit, Scalar};

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> Rule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
pub fn legendre<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    if n == 0 {
        return (p0, T::zero());
    }
    let mut p1 = x;
    for k in 2..=n {
        let kf: T = from_usize(k);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf: T = from_usize(n);
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending and exactly antisymmetric.
pub fn gauss_legendre<T: Scalar>(n: usize) -> Rule<T> {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf: T = from_usize(n);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton.
        let theta = T::PI() * (from_usize::<T>(i) + lit(0.75)) / (nf + lit(0.5));
        let mut x = theta.cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= T::epsilon() * lit(4.0) {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    Rule { nodes, weights }
}

/// `n`-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre_on<T: Scalar>(n: usize, a: T, b: T) -> Rule<T> {
    let base = gauss_legendre::<T>(n);
    let half = (b - a) * lit(0.5);
    let mid = (a + b) * lit(0.5);
    Rule {
        nodes: base.nodes.iter().map(|&x| mid + half * x).collect(),
        weights: base.weights.iter().map(|&w| w * half).collect(),
    }
}

/// Rule on `[0, len]` clustered at 0 through `u = len * t^grade`, `t` Gauss–Legendre on `[0, 1]`.
///
/// Integrands behaving like `u^p log u` near 0 regain high-order convergence.
pub fn graded_gauss_legendre<T: Scalar>(n: usize, len: T, grade: u32) -> Rule<T> {
    let base = gauss_legendre_on::<T>(n, T::zero(), T::one());
    let g: T = from_usize(grade as usize);
    Rule {
        nodes: base
            .nodes
            .iter()
            .map(|&t| len * t.powi(grade as i32))
            .collect(),
        weights: base
            .nodes
            .iter()
            .zip(&base.weights)
            .map(|(&t, &w)| w * len * g * t.powi(grade as i32 - 1))
            .collect(),
    }
}
