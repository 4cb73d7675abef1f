use crate::error::Result;
use crate::quadrature::graded_gauss_legendre;
use crate::scalar::{from_usize, lit, Scalar};

/// Zonal kernels `psi(u)`, `u = theta.xi`, that occur in the angular integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZonalKernel {
    /// `u^p sgn(u)`
    SignedPower(u32),
    /// `u^p log|u|`
    LogPower(u32),
    /// `u^p`
    Power(u32),
}

impl ZonalKernel {
    pub fn eval<T: Scalar>(&self, u: T) -> T {
        match *self {
            ZonalKernel::SignedPower(p) => {
                let a = u.abs().powi(p as i32);
                if u < T::zero() && p % 2 == 0 {
                    -a
                } else if u == T::zero() {
                    T::zero()
                } else {
                    a
                }
            }
            ZonalKernel::LogPower(p) => {
                if u == T::zero() {
                    T::zero()
                } else {
                    u.powi(p as i32) * u.abs().ln()
                }
            }
            ZonalKernel::Power(p) => u.powi(p as i32),
        }
    }

    /// Parity of `psi` under `u -> -u`.
    pub fn parity(&self) -> usize {
        match *self {
            ZonalKernel::SignedPower(p) => (p as usize + 1) % 2,
            ZonalKernel::LogPower(p) | ZonalKernel::Power(p) => p as usize % 2,
        }
    }

    fn is_polynomial(&self) -> Option<usize> {
        match *self {
            ZonalKernel::Power(p) => Some(p as usize),
            _ => None,
        }
    }
}

/// Multipliers `lambda_l`, `l = 0..=l_max`, with `int psi(theta.xi) Y(xi) dsigma = lambda_l Y(theta)`
/// for every harmonic `Y` of degree `l`.
///
/// `n = 2`: `lambda_l = 2 int_0^pi psi(cos t) cos(l t) dt`; `n = 3`:
/// `lambda_l = 2 pi int_{-1}^1 psi(u) P_l(u) du`. The kink of `psi` at `u = 0` is handled by
/// splitting there and grading the Gauss–Legendre nodes toward it with exponent 3.
pub fn funk_hecke_multipliers<T: Scalar>(
    n: usize,
    l_max: usize,
    kernel: ZonalKernel,
) -> Result<Vec<T>> {
    super::check_dim(n)?;
    let points = (8 * l_max).max(200);
    let parity = kernel.parity();
    let vanishes = |l: usize| l % 2 != parity || kernel.is_polynomial().is_some_and(|p| l > p);
    let mut out = vec![T::zero(); l_max + 1];
    if n == 2 {
        let half = T::FRAC_PI_2();
        let rule = graded_gauss_legendre::<T>(points, half, 3);
        for (l, slot) in out.iter_mut().enumerate() {
            if vanishes(l) {
                continue;
            }
            let lf: T = from_usize(l);
            let mut acc = T::zero();
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                for t in [half - x, half + x] {
                    acc += w * kernel.eval(t.cos()) * (lf * t).cos();
                }
            }
            *slot = lit::<T>(2.0) * acc;
        }
    } else {
        let rule = graded_gauss_legendre::<T>(points, T::one(), 3);
        let two_pi = lit::<T>(2.0) * T::PI();
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let (kp, km) = (kernel.eval(x), kernel.eval(-x));
            // Legendre three-term recurrence for all degrees at once.
            let (mut p0, mut p1) = (T::one(), x);
            for (l, slot) in out.iter_mut().enumerate() {
                let pl = if l == 0 { p0 } else { p1 };
                if !vanishes(l) {
                    let sign = if l % 2 == 0 { T::one() } else { -T::one() };
                    *slot += two_pi * w * pl * (kp + sign * km);
                }
                if l >= 1 {
                    let lf: T = from_usize(l);
                    let next = ((lf + lf + T::one()) * x * p1 - lf * p0) / (lf + T::one());
                    p0 = p1;
                    p1 = next;
                }
            }
        }
    }
    Ok(out)
}
