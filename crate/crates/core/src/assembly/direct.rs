use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{truncation_bound, PlaneWave, PlaneWaveSolver};
use crate::operator::Operator;
use crate::quadrature::gauss_legendre_on;
use crate::scalar::factorial;
use crate::sphere::ZonalRule;

/// Real constant in front of the sphere integrals: `1 / (4 (2 pi i)^{n-1})` for odd `n`,
/// `-1 / (2 pi i)^n` for even `n`.
pub fn plane_wave_constant(n: usize) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    if n % 2 == 1 {
        let sign = if ((n - 1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        sign / (4.0 * two_pi.powi(n as i32 - 1))
    } else {
        let sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        -sign / two_pi.powi(n as i32)
    }
}

/// Graded rule for the direct integrals, with `points` polar nodes per half.
pub fn direct_rule(n: usize, points: usize) -> Result<ZonalRule<f64>> {
    ZonalRule::new(n, points, 2 * points, 3)
}

/// Plane-wave series at the nodes of `quad` around `theta`, truncated where the class bound at
/// `|s| <= r` drops below roundoff.
fn waves(
    a: &Operator<f64>,
    quad: &ZonalRule<f64>,
    theta: &[f64],
    r: f64,
) -> Result<Vec<(PlaneWave<f64>, f64, f64)>> {
    let solver = PlaneWaveSolver::new(a)?;
    let k = a.k();
    let two_k = 2 * k as usize;
    let mut jmax = two_k + 20;
    let l = solver.class_index();
    let tail = |j: usize| truncation_bound::<f64>(l, j, k) * r.powi(j as i32) / factorial::<f64>(j);
    while jmax < two_k + 150 && tail(jmax + 1) > 1e-17 {
        jmax += 10;
    }
    let nodes = quad.nodes(theta);
    nodes
        .par_iter()
        .map(|(xi, u, w)| Ok((solver.series(xi, jmax)?, *u, *w)))
        .collect()
}

fn split(x: &[f64]) -> (f64, Vec<f64>) {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    (r, x.iter().map(|v| v / r).collect())
}

fn check(a: &Operator<f64>, x: &[f64], odd: bool) -> Result<()> {
    if x.len() != a.dim() {
        return Err(Error::invalid("x", "length differs from n"));
    }
    if (a.dim() % 2 == 1) != odd {
        return Err(Error::invalid(
            "n",
            if odd {
                "W_0 is defined for odd n"
            } else {
                "W_1 and W_2 are defined for even n"
            },
        ));
    }
    Ok(())
}

/// `W_0(x) = 1/(4 (2 pi i)^{n-1}) int_S int_0^{x.xi} v(x, xi, t) sgn t dt dsigma`, odd `n`.
pub fn compute_w0(a: &Operator<f64>, x: &[f64], quad: &ZonalRule<f64>) -> Result<f64> {
    check(a, x, true)?;
    let (r, theta) = split(x);
    if r == 0.0 {
        return Ok(0.0);
    }
    let data = waves(a, quad, &theta, r)?;
    let inner = gauss_legendre_on::<f64>(data[0].0.order() / 2 + 2, 0.0, 1.0);
    let total: f64 = data
        .iter()
        .map(|(pw, u, w)| {
            // t = s tau: int_0^s v(s - t) sgn t dt = |s| int_0^1 v(s (1 - tau)) dtau
            let s = r * u;
            let i = inner.integrate(|tau| pw.v_series(s * (1.0 - tau)));
            w * s.abs() * i
        })
        .sum();
    Ok(plane_wave_constant(a.dim()) * total)
}

/// `W_1(x) = -1/(2 pi i)^n int_S v(x, xi, 0) log|x.xi| dsigma`, even `n`, with
/// `log|x.xi| = log|x| + log|theta.xi|` on nodes graded toward `theta.xi = 0`.
pub fn compute_w1(a: &Operator<f64>, x: &[f64], quad: &ZonalRule<f64>) -> Result<f64> {
    check(a, x, false)?;
    let (r, theta) = split(x);
    if r == 0.0 {
        return Err(Error::invalid("x", "W_1 is singular at the origin"));
    }
    let data = waves(a, quad, &theta, r)?;
    let total: f64 = data
        .iter()
        .map(|(pw, u, w)| {
            let log = if *u == 0.0 {
                0.0
            } else {
                r.ln() + u.abs().ln()
            };
            w * pw.v_series(r * u) * log
        })
        .sum();
    Ok(plane_wave_constant(a.dim()) * total)
}

/// `W_2(x) = -1/(2 pi i)^n int_S int_0^{x.xi} (v(x, xi, t) - v(x, xi, 0)) / t dt dsigma`, even
/// `n`. The difference quotient is expanded as
/// `((s-t)^j - s^j) / t = -sum_{i<j} (s-t)^i s^{j-1-i}`, free of cancellation for `t` between
/// 0 and `s`.
pub fn compute_w2(a: &Operator<f64>, x: &[f64], quad: &ZonalRule<f64>) -> Result<f64> {
    check(a, x, false)?;
    let (r, theta) = split(x);
    if r == 0.0 {
        return Ok(0.0);
    }
    let data = waves(a, quad, &theta, r)?;
    let inner = gauss_legendre_on::<f64>(data[0].0.order() / 2 + 2, 0.0, 1.0);
    let total: f64 = data
        .iter()
        .map(|(pw, u, w)| {
            let s = r * u;
            let quotient = |t: f64| {
                // q_j = sum_{i<j} (s-t)^i s^{j-1-i}, q_{j+1} = s q_j + (s-t)^j
                let mut q = 0.0;
                let mut power = 1.0;
                let mut acc = 0.0;
                for (j, &c) in pw.coeffs.iter().enumerate() {
                    if j > 0 {
                        q = s * q + power;
                        power *= s - t;
                    }
                    if c != 0.0 {
                        acc -= c / factorial::<f64>(j) * q;
                    }
                }
                acc
            };
            w * s * inner.integrate(|tau| quotient(s * tau))
        })
        .sum();
    Ok(plane_wave_constant(a.dim()) * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::apply_operator_fd;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn constants() {
        assert_relative_eq!(
            plane_wave_constant(3),
            -1.0 / (16.0 * PI * PI),
            epsilon = 1e-16
        );
        assert_relative_eq!(
            plane_wave_constant(2),
            1.0 / (4.0 * PI * PI),
            epsilon = 1e-16
        );
    }

    #[test]
    fn w0_for_the_3d_laplacian() {
        let a = Operator::laplacian(3);
        let quad = direct_rule(3, 24).unwrap();
        let w = compute_w0(&a, &[0.0, 0.6, 0.8], &quad).unwrap();
        assert_relative_eq!(w, -1.0 / (96.0 * PI), epsilon = 1e-12);
        assert_eq!(compute_w0(&a, &[0.0, 0.0, 0.0], &quad).unwrap(), 0.0);
        let x = [0.3, -0.5, 0.4];
        let lw = apply_operator_fd(&a, &|y: &[f64]| compute_w0(&a, y, &quad).unwrap(), &x, 1e-2)
            .unwrap();
        let r = (0.5f64).sqrt();
        assert_relative_eq!(lw, -r / (8.0 * PI), epsilon = 1e-7);
    }

    #[test]
    fn w1_w2_for_the_2d_laplacian() {
        let a = Operator::laplacian(2);
        let quad = direct_rule(2, 40).unwrap();
        let r: f64 = 1.7;
        let x = [r * 0.6, r * 0.8];
        let w1 = compute_w1(&a, &x, &quad).unwrap();
        let expected = r * r * r.ln() / (8.0 * PI) + r * r * (0.5 - 2f64.ln()) / (8.0 * PI);
        assert_relative_eq!(w1, expected, epsilon = 1e-12);
        let w2 = compute_w2(&a, &x, &quad).unwrap();
        assert_relative_eq!(w2, -1.5 * r * r / (8.0 * PI), epsilon = 1e-12);
        assert_eq!(compute_w2(&a, &[0.0, 0.0], &quad).unwrap(), 0.0);
        assert!(compute_w0(&a, &x, &quad).is_err());
    }
}
