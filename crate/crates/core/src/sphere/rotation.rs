use crate::error::{Error, Result};
use crate::quadrature::graded_gauss_legendre;
use crate::scalar::{from_usize, lit, Scalar};

/// `T_eta(theta)_{jk} = delta_jk + 2 theta_j eta_k - (theta + eta)_j (theta + eta)_k / (1 + theta.eta)`,
/// an orthogonal matrix with `T^t theta = eta` (row-major `n x n`).
pub fn rotation_map<T: Scalar>(eta: &[T], theta: &[T]) -> Result<Vec<Vec<T>>> {
    let n = eta.len();
    let dot: T = eta.iter().zip(theta).map(|(&a, &b)| a * b).sum();
    if dot <= lit(1e-10) {
        return Err(Error::HalfSphereViolation {
            dot: dot.to_f64().unwrap_or(f64::NAN),
        });
    }
    let denom = T::one() + dot;
    let two: T = lit(2.0);
    Ok((0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let delta = if j == k { T::one() } else { T::zero() };
                    delta + two * theta[j] * eta[k]
                        - (theta[j] + eta[j]) * (theta[k] + eta[k]) / denom
                })
                .collect()
        })
        .collect())
}

/// Orthonormal frame `(theta, e_1, ..., e_{n-1})` obtained from `T_eta(theta)` with `eta` the
/// signed coordinate axis closest to `theta`.
pub(crate) fn frame<T: Scalar>(theta: &[T]) -> Vec<Vec<T>> {
    let n = theta.len();
    let (axis, _) = theta
        .iter()
        .enumerate()
        .fold((0, T::zero()), |(bi, bv), (i, &v)| {
            if v.abs() > bv {
                (i, v.abs())
            } else {
                (bi, bv)
            }
        });
    let sign = if theta[axis] < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    let mut eta = vec![T::zero(); n];
    eta[axis] = sign;
    let t = rotation_map(&eta, theta).expect("closest axis lies in the open half-sphere");
    let mut out = vec![theta.to_vec()];
    for k in 0..n {
        if k != axis {
            out.push((0..n).map(|j| t[j][k]).collect());
        }
    }
    out
}

/// Quadrature for `int_{S^{n-1}} g(xi) dsigma` in coordinates aligned with a pole `theta`:
/// `u = theta.xi` on Gauss–Legendre halves graded toward the great circle `u = 0`, times an
/// azimuthal trapezoid (`n = 3`) or the two points `+-sin t` (`n = 2`).
#[derive(Debug, Clone)]
pub struct ZonalRule<T> {
    n: usize,
    /// `(u, sqrt(1 - u^2), weight)` of the polar factor.
    polar: Vec<(T, T, T)>,
    azimuth: usize,
}

impl<T: Scalar> ZonalRule<T> {
    /// `points` Gauss–Legendre nodes per half, grading exponent `grade`.
    pub fn new(n: usize, points: usize, azimuth: usize, grade: u32) -> Result<Self> {
        super::check_dim(n)?;
        let mut polar = Vec::new();
        if n == 2 {
            // t in [0, pi], u = cos t, graded toward t = pi/2 from both sides.
            let half = T::FRAC_PI_2();
            let g = graded_gauss_legendre::<T>(points, half, grade);
            for (&x, &w) in g.nodes.iter().zip(&g.weights) {
                for t in [half - x, half + x] {
                    polar.push((t.cos(), t.sin(), w));
                }
            }
        } else {
            let g = graded_gauss_legendre::<T>(points, T::one(), grade);
            for (&x, &w) in g.nodes.iter().zip(&g.weights) {
                for u in [x, -x] {
                    polar.push((u, (T::one() - u * u).max(T::zero()).sqrt(), w));
                }
            }
        }
        Ok(ZonalRule {
            n,
            polar,
            azimuth: if n == 2 { 2 } else { azimuth.max(4) },
        })
    }

    pub fn len(&self) -> usize {
        self.polar.len() * self.azimuth
    }

    pub fn is_empty(&self) -> bool {
        self.polar.is_empty()
    }

    /// Nodes `xi` with weights, for the pole `theta`; also returns `u = theta.xi`.
    pub fn nodes(&self, theta: &[T]) -> Vec<(Vec<T>, T, T)> {
        let f = frame(theta);
        let mut out = Vec::with_capacity(self.len());
        if self.n == 2 {
            for &(u, s, w) in &self.polar {
                for sign in [T::one(), -T::one()] {
                    let xi = vec![
                        u * f[0][0] + sign * s * f[1][0],
                        u * f[0][1] + sign * s * f[1][1],
                    ];
                    out.push((xi, u, w));
                }
            }
            return out;
        }
        let dpsi = lit::<T>(2.0) * T::PI() / from_usize(self.azimuth);
        for &(u, s, w) in &self.polar {
            for j in 0..self.azimuth {
                let (sp, cp) = (dpsi * from_usize(j)).sin_cos();
                let xi = (0..3)
                    .map(|i| u * f[0][i] + s * (cp * f[1][i] + sp * f[2][i]))
                    .collect();
                out.push((xi, u, w * dpsi));
            }
        }
        out
    }

    /// `int g(xi, theta.xi) dsigma_xi`.
    pub fn integrate(&self, theta: &[T], g: impl Fn(&[T], T) -> T) -> T {
        self.nodes(theta)
            .iter()
            .map(|(xi, u, w)| *w * g(xi, *u))
            .sum()
    }
}
