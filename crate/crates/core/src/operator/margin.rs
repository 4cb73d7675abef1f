//! Ellipticity margin `inf_{|xi| = 1} |P_0(xi)|` by dense sampling plus golden-section refinement.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Scalar};

use super::Operator;

/// Default number of samples per angular direction.
pub const DEFAULT_MARGIN_SAMPLES: usize = 256;

const REFINE_TOL: f64 = 1e-10;
const NON_ELLIPTIC_FACTOR: f64 = 1e-8;

/// Lower estimate of `inf |P_0|` over the unit sphere; 0 when the principal symbol
/// changes sign or a sample falls below the refinement tolerance.
///
/// Only `n = 2` and `n = 3` are sampled; other dimensions return 0.
pub fn ellipticity_margin<T: Scalar>(a: &Operator<T>, samples: usize) -> T {
    let samples = samples.max(64);
    let tol: T = lit(REFINE_TOL);
    match a.dim() {
        2 => margin_circle(a, samples, tol),
        3 => margin_sphere(a, samples, tol),
        _ => T::zero(),
    }
}

/// Margin together with the non-ellipticity decision used before kernel construction.
pub fn check_elliptic<T: Scalar>(a: &Operator<T>) -> Result<T> {
    if !matches!(a.dim(), 2 | 3) {
        return Err(Error::UnsupportedDimension(a.dim()));
    }
    let margin = ellipticity_margin(a, DEFAULT_MARGIN_SAMPLES);
    let threshold = lit::<T>(NON_ELLIPTIC_FACTOR) * a.principal_scale();
    if margin <= threshold {
        return Err(Error::NonElliptic {
            margin: margin.to_f64().unwrap_or(0.0),
        });
    }
    Ok(margin)
}

fn circle_value<T: Scalar>(a: &Operator<T>, phi: T) -> T {
    a.principal_symbol(&[phi.cos(), phi.sin()])
}

fn margin_circle<T: Scalar>(a: &Operator<T>, samples: usize, tol: T) -> T {
    // P_0 is even, so the half circle suffices.
    let step = T::PI() / from_usize(samples);
    let values: Vec<T> = (0..samples)
        .map(|i| circle_value(a, step * from_usize(i)))
        .collect();
    if let Some(m) = degenerate(&values, tol) {
        return m;
    }
    let (imin, vmin) = argmin_abs(&values);
    let centre = step * from_usize(imin);
    let refined = golden_section(
        |phi| circle_value(a, phi).abs(),
        centre - step,
        centre + step,
        tol,
    );
    finish(vmin.abs().min(refined), tol)
}

fn sphere_value<T: Scalar>(a: &Operator<T>, theta: T, phi: T) -> T {
    let (st, ct) = theta.sin_cos();
    a.principal_symbol(&[st * phi.cos(), st * phi.sin(), ct])
}

fn margin_sphere<T: Scalar>(a: &Operator<T>, samples: usize, tol: T) -> T {
    // Upper hemisphere by evenness; polar angle in [0, pi/2], azimuth in [0, 2 pi).
    let polar = samples / 2 + 1;
    let dt = T::FRAC_PI_2() / from_usize(polar - 1);
    let dp = lit::<T>(2.0) * T::PI() / from_usize(samples);
    let mut values = Vec::with_capacity(polar * samples);
    for i in 0..polar {
        for j in 0..samples {
            values.push(sphere_value(a, dt * from_usize(i), dp * from_usize(j)));
        }
    }
    if let Some(m) = degenerate(&values, tol) {
        return m;
    }
    let (imin, vmin) = argmin_abs(&values);
    let mut theta = dt * from_usize(imin / samples);
    let mut phi = dp * from_usize(imin % samples);
    let mut best = vmin.abs();
    let (mut wt, mut wp) = (dt, dp);
    for _ in 0..8 {
        theta = golden_arg(
            |t| sphere_value(a, t, phi).abs(),
            theta - wt,
            theta + wt,
            tol,
        );
        phi = golden_arg(|p| sphere_value(a, theta, p).abs(), phi - wp, phi + wp, tol);
        best = best.min(sphere_value(a, theta, phi).abs());
        wt *= lit(0.5);
        wp *= lit(0.5);
    }
    finish(best, tol)
}

fn degenerate<T: Scalar>(values: &[T], tol: T) -> Option<T> {
    let pos = values.iter().any(|&v| v > tol);
    let neg = values.iter().any(|&v| v < -tol);
    let tiny = values.iter().any(|&v| v.abs() <= tol);
    (tiny || (pos && neg)).then(T::zero)
}

fn argmin_abs<T: Scalar>(values: &[T]) -> (usize, T) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, values[0]), |(bi, bv), (i, v)| {
            if v.abs() < bv.abs() {
                (i, v)
            } else {
                (bi, bv)
            }
        })
}

fn finish<T: Scalar>(m: T, tol: T) -> T {
    if m <= tol {
        T::zero()
    } else {
        m
    }
}

fn golden_section<T: Scalar>(f: impl Fn(T) -> T, lo: T, hi: T, tol: T) -> T {
    f(golden_arg(&f, lo, hi, tol))
}

fn golden_arg<T: Scalar>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    let g: T = lit(0.618_033_988_749_894_9);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iters = 0;
    while (hi - lo).abs() > tol && iters < 200 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
        iters += 1;
    }
    (lo + hi) * lit(0.5)
}
