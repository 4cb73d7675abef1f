//! High-order centred finite differences and their application to operators.

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::scalar::{from_usize, lit, Scalar};

use super::Operator;

/// A real-valued field on `R^n` that may refuse some points.
pub trait ScalarField<T> {
    /// Value at `x`, or `None` outside the field's domain.
    fn value(&self, x: &[T]) -> Option<T>;
}

impl<T: Scalar, F: Fn(&[T]) -> T> ScalarField<T> for F {
    fn value(&self, x: &[T]) -> Option<T> {
        let v = self(x);
        v.is_finite().then_some(v)
    }
}

/// Weights for the `order`-th derivative at 0 from values at `points` (Fornberg's recursion).
pub fn fornberg_weights<T: Scalar>(points: &[T], order: usize) -> Vec<T> {
    let n = points.len();
    let mut c = vec![vec![T::zero(); order + 1]; n];
    let mut c1 = T::one();
    let mut c4 = points[0];
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = points[i];
        for j in 0..i {
            let c3 = points[i] - points[j];
            c2 *= c3;
            if j == i - 1 {
                for kk in (1..=mn).rev() {
                    c[i][kk] =
                        c1 * (from_usize::<T>(kk) * c[i - 1][kk - 1] - c5 * c[i - 1][kk]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for kk in (1..=mn).rev() {
                c[j][kk] = (c4 * c[j][kk] - from_usize::<T>(kk) * c[j][kk - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Centred stencil offsets (in units of h) and weights with fourth-order accuracy.
fn stencil<T: Scalar>(order: u32) -> Vec<(i32, T)> {
    if order == 0 {
        return vec![(0, T::one())];
    }
    let half = (order as i32 + 1) / 2 + 1;
    let offsets: Vec<i32> = (-half..=half).collect();
    let points: Vec<T> = offsets.iter().map(|&o| lit(o as f64)).collect();
    let w = fornberg_weights(&points, order as usize);
    offsets
        .into_iter()
        .zip(w)
        .filter(|(_, w)| *w != T::zero())
        .collect()
}

fn tensor_difference<T: Scalar, F: ScalarField<T> + ?Sized>(
    f: &F,
    x: &[T],
    alpha: &MultiIndex,
    h: T,
) -> Result<T> {
    let stencils: Vec<Vec<(i32, T)>> = alpha.entries().iter().map(|&a| stencil(a)).collect();
    let mut total = T::zero();
    let mut counter = vec![0usize; x.len()];
    let mut point = x.to_vec();
    loop {
        let mut weight = T::one();
        for (axis, s) in stencils.iter().enumerate() {
            let (off, w) = s[counter[axis]];
            point[axis] = x[axis] + h * lit(off as f64);
            weight *= w;
        }
        total += weight * f.value(&point).ok_or(Error::StencilOutOfDomain)?;
        let mut axis = 0;
        loop {
            if axis == x.len() {
                let scale = h.powi(alpha.order() as i32);
                return Ok(total / scale);
            }
            counter[axis] += 1;
            if counter[axis] < stencils[axis].len() {
                break;
            }
            counter[axis] = 0;
            axis += 1;
        }
    }
}

fn richardson<T: Scalar>(mut estimate: impl FnMut(T) -> Result<T>, h: T) -> Result<T> {
    const LEVELS: usize = 6;
    let tol: T = lit(1e-6);
    let mut prev_raw = estimate(h)?;
    let mut prev_extrap: Option<T> = None;
    let mut best: Option<(T, T)> = None;
    let mut step = h;
    for _ in 1..LEVELS {
        step *= lit(0.5);
        let raw = estimate(step)?;
        let extrap = (lit::<T>(16.0) * raw - prev_raw) / lit(15.0);
        if let Some(p) = prev_extrap {
            let diff = (extrap - p).abs();
            if diff <= tol * T::one().max(extrap.abs()) {
                return Ok(extrap);
            }
            if best.is_none_or(|(d, _)| diff < d) {
                best = Some((diff, extrap));
            }
        }
        prev_extrap = Some(extrap);
        prev_raw = raw;
    }
    Ok(best.map(|(_, v)| v).or(prev_extrap).unwrap_or(prev_raw))
}

/// Single partial derivative `d^alpha f(x)` by fourth-order stencils with Richardson halving.
pub fn fd_derivative<T: Scalar, F: ScalarField<T> + ?Sized>(
    f: &F,
    x: &[T],
    alpha: &MultiIndex,
    h: T,
) -> Result<T> {
    if h <= T::zero() {
        return Err(Error::invalid("h", "step must be positive"));
    }
    if alpha.order() == 0 {
        return f.value(x).ok_or(Error::StencilOutOfDomain);
    }
    richardson(|s| tensor_difference(f, x, alpha, s), h)
}

/// `sum_alpha a_alpha D_h^alpha f(x)` with fourth-order centred tensor stencils, refined by
/// Richardson halving until two estimates agree to 1e-6 or six levels are used.
pub fn apply_operator_fd<T: Scalar, F: ScalarField<T> + ?Sized>(
    a: &Operator<T>,
    f: &F,
    x: &[T],
    h: T,
) -> Result<T> {
    if x.len() != a.dim() {
        return Err(Error::invalid(
            "x",
            "point dimension does not match the operator",
        ));
    }
    if h <= T::zero() {
        return Err(Error::invalid("h", "step must be positive"));
    }
    let combined = |s: T| -> Result<T> {
        let mut total = T::zero();
        for (alpha, &c) in a.coefficients() {
            let d = if alpha.order() == 0 {
                f.value(x).ok_or(Error::StencilOutOfDomain)?
            } else {
                tensor_difference(f, x, alpha, s)?
            };
            total += c * d;
        }
        Ok(total)
    };
    richardson(combined, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fornberg_reproduces_textbook_stencils() {
        let pts: Vec<f64> = (-2..=2).map(|i| i as f64).collect();
        let w = fornberg_weights(&pts, 2);
        let expect = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
        let w1 = fornberg_weights(&pts, 1);
        let expect1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w1.iter().zip(expect1) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn stencils_are_fourth_order() {
        for order in 1..=4u32 {
            let s = stencil::<f64>(order);
            // Exact on monomials up to degree order + 3.
            for p in 0..=(order + 3) {
                let sum: f64 = s.iter().map(|(o, w)| w * (*o as f64).powi(p as i32)).sum();
                let exact = if p == order {
                    (1..=order).map(|i| i as f64).product()
                } else {
                    0.0
                };
                assert!(
                    (sum - exact).abs() < 1e-10,
                    "order {order} degree {p}: {sum}"
                );
            }
        }
    }

    #[test]
    fn laplacian_examples() {
        let lap = Operator::<f64>::laplacian(2);
        let r2 = |x: &[f64]| x[0] * x[0] + x[1] * x[1];
        assert_relative_eq!(
            apply_operator_fd(&lap, &r2, &[0.3, -0.7], 1e-2).unwrap(),
            4.0,
            epsilon = 1e-8
        );
        let log = |x: &[f64]| (x[0] * x[0] + x[1] * x[1]).sqrt().ln();
        assert!(
            apply_operator_fd(&lap, &log, &[1.0, 0.0], 1e-2)
                .unwrap()
                .abs()
                < 1e-6
        );
        let bih = Operator::<f64>::polyharmonic(2, 2);
        let r2log = |x: &[f64]| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            0.5 * r2 * r2.ln()
        };
        assert!(
            apply_operator_fd(&bih, &r2log, &[1.0, 0.0], 1e-2)
                .unwrap()
                .abs()
                < 1e-4
        );
    }

    #[test]
    fn cubic_polynomials_are_exact() {
        let lap = Operator::<f64>::laplacian(3);
        let f = |x: &[f64]| 2.0 * x[0].powi(3) - x[1] * x[2] * x[0] + 3.0 * x[2] * x[2] + x[1];
        for x in [[0.1, 0.2, 0.3], [-1.0, 2.0, 0.5]] {
            let exact = 12.0 * x[0] + 6.0;
            assert!((apply_operator_fd(&lap, &f, &x, 1e-2).unwrap() - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn domain_failures_are_reported() {
        let lap = Operator::<f64>::laplacian(2);
        let f = |x: &[f64]| if x[0] > 0.0 { 1.0 } else { f64::NAN };
        assert_eq!(
            apply_operator_fd(&lap, &f, &[0.01, 0.0], 1e-2),
            Err(Error::StencilOutOfDomain)
        );
    }

    #[test]
    fn mixed_partial() {
        let f = |x: &[f64]| (x[0] * x[1]).sin();
        let alpha: MultiIndex = "1,1".parse().unwrap();
        let (x, y) = (0.4f64, 0.9f64);
        let exact = (x * y).cos() - x * y * (x * y).sin();
        assert_relative_eq!(
            fd_derivative(&f, &[x, y], &alpha, 1e-2).unwrap(),
            exact,
            epsilon = 1e-9
        );
    }
}
