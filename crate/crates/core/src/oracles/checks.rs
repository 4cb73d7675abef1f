//! The distributional delta test, pointwise residual scans and the log-coefficient fit.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::layer::KernelHandle;
use crate::operator::{apply_operator_fd, Operator};
use crate::quadrature::gauss_legendre_on;
use crate::sphere::build_quadrature;

use super::test_function::TestFunction;

/// Smallest accepted number of radial nodes in the delta test.
pub const MIN_DELTA_GRID: usize = 64;

/// Relative error `|int K (L^t phi) - phi(0)| / |phi(0)|`.
///
/// Polar coordinates about the origin with `r = R t^q` (`q = 2` for `n = 2`, `3` for `n = 3`)
/// and `grid` Gauss–Legendre nodes in `t`; the angular rule has order `grid`. `R` is the
/// distance from the origin to the far edge of the support.
pub fn distributional_delta_test<K: KernelHandle + ?Sized>(
    kernel: &K,
    a: &Operator<f64>,
    phi: &TestFunction,
    grid: usize,
) -> Result<f64> {
    let n = a.dim();
    if kernel.dim() != n || phi.dim() != n {
        return Err(Error::invalid(
            "kernel",
            "kernel, operator and test function dimensions differ",
        ));
    }
    if grid < MIN_DELTA_GRID {
        return Err(Error::invalid(
            "grid",
            format!("at least {MIN_DELTA_GRID} nodes are required"),
        ));
    }
    let offset = phi.center().iter().map(|c| c * c).sum::<f64>().sqrt();
    if offset >= phi.radius() {
        return Err(Error::invalid(
            "center",
            "the support must contain the origin",
        ));
    }
    let reach = offset + phi.radius();
    let valid = kernel.validity_radius();
    if reach > valid {
        return Err(Error::SupportExceedsValidity {
            support: reach,
            valid,
        });
    }
    let adjoint = a.adjoint();
    let q = if n == 2 { 2 } else { 3 };
    let radial = gauss_legendre_on::<f64>(grid, 0.0, 1.0);
    let sphere = build_quadrature::<f64>(n, grid)?;
    let shells: Vec<Result<f64>> = radial
        .nodes
        .par_iter()
        .zip(&radial.weights)
        .map(|(&t, &w)| {
            let r = reach * t.powi(q);
            let jac = reach * q as f64 * t.powi(q - 1) * r.powi(n as i32 - 1);
            let mut shell = 0.0;
            for (omega, &wo) in sphere.nodes().zip(sphere.weights()) {
                let y: Vec<f64> = omega.iter().map(|o| r * o).collect();
                let ltphi = phi.apply(&adjoint, &y);
                if ltphi != 0.0 {
                    shell += wo * ltphi * kernel.value(&y)?;
                }
            }
            Ok(w * jac * shell)
        })
        .collect();
    let mut total = 0.0;
    for s in shells {
        total += s?;
    }
    let phi0 = phi.value(&vec![0.0; n]);
    Ok((total - phi0).abs() / phi0.abs())
}

/// Deterministic sample points with radii spread geometrically over `[r_min, r_max]`.
pub fn annulus_points(n: usize, annulus: (f64, f64), count: usize) -> Vec<Vec<f64>> {
    let (lo, hi) = annulus;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let s = (i as f64 + 0.5) / count as f64;
            let r = lo * (hi / lo).powf(s);
            let phi = golden * i as f64;
            if n == 2 {
                vec![r * phi.cos(), r * phi.sin()]
            } else {
                let z = 1.0 - 2.0 * s;
                let rho = (1.0 - z * z).sqrt();
                vec![r * rho * phi.cos(), r * rho * phi.sin(), r * z]
            }
        })
        .collect()
}

/// Largest `|L K(x)|` by finite differences over `count` points of the annulus, each divided
/// by the local scale `sum_alpha |a_alpha| r^{2k - n - |alpha|} (1 + |log r|)`.
pub fn residual_scan<K: KernelHandle + ?Sized>(
    kernel: &K,
    a: &Operator<f64>,
    annulus: (f64, f64),
    count: usize,
) -> Result<f64> {
    let (lo, hi) = annulus;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 {
        return Err(Error::invalid(
            "annulus",
            "need 0 < r_min <= r_max and at least one point",
        ));
    }
    residual_at_points(kernel, a, &annulus_points(a.dim(), annulus, count))
}

/// As [`residual_scan`] at the given nonzero points.
pub fn residual_at_points<K: KernelHandle + ?Sized>(
    kernel: &K,
    a: &Operator<f64>,
    points: &[Vec<f64>],
) -> Result<f64> {
    if kernel.dim() != a.dim() {
        return Err(Error::invalid(
            "kernel",
            "kernel and operator dimensions differ",
        ));
    }
    let lead = 2 * a.k() as i32 - a.dim() as i32;
    let field = |x: &[f64]| kernel.value(x).unwrap_or(f64::NAN);
    let values: Vec<Result<f64>> = points
        .par_iter()
        .map(|x| {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if x.len() != a.dim() || !(r > 0.0) {
                return Err(Error::invalid(
                    "points",
                    "sample points must be nonzero and match n",
                ));
            }
            let residual = apply_operator_fd(a, &field, x, 0.02 * r)?;
            let scale: f64 = a
                .coefficients()
                .iter()
                .map(|(alpha, c)| c.abs() * r.powi(lead - alpha.order() as i32))
                .sum::<f64>()
                * (1.0 + r.ln().abs());
            Ok(residual.abs() / scale)
        })
        .collect();
    let mut worst = 0.0f64;
    for v in values {
        worst = worst.max(v?);
    }
    Ok(worst)
}

/// Least-squares fit `c1 + c2 log rho` to sphere averages of `K(rho theta) / rho^lead`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFit {
    pub c1: f64,
    pub c2: f64,
    /// Largest deviation of the averages from the fitted line.
    pub residual: f64,
}

/// Fits on the spheres of radius `r, 2r, 4r`; `lead` is the power `2k - n`.
pub fn log_fit<K: KernelHandle + ?Sized>(kernel: &K, lead: i32, r: f64) -> Result<LogFit> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", "radius must be positive"));
    }
    let rule = build_quadrature::<f64>(kernel.dim(), 32)?;
    let area: f64 = rule.weights().iter().sum();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for rho in [r, 2.0 * r, 4.0 * r] {
        let mut avg = 0.0;
        for (omega, &w) in rule.nodes().zip(rule.weights()) {
            let y: Vec<f64> = omega.iter().map(|o| rho * o).collect();
            avg += w * kernel.value(&y)?;
        }
        xs.push(rho.ln());
        ys.push(avg / area / rho.powi(lead));
    }
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let c2 = sxy / sxx;
    let c1 = my - c2 * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - c1 - c2 * x).abs())
        .fold(0.0, f64::max);
    Ok(LogFit { c1, c2, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layer::ScaledKernel;
    use crate::multi_index::MultiIndex;
    use crate::oracles::ReferenceKernel;

    fn suite() -> Vec<ReferenceKernel> {
        vec![
            ReferenceKernel::Laplace2d,
            ReferenceKernel::Laplace3d,
            ReferenceKernel::Biharmonic2d,
            ReferenceKernel::yukawa2d(1.0).unwrap(),
            ReferenceKernel::yukawa3d(1.5).unwrap(),
            ReferenceKernel::anisotropic2d(4.0, 0.0, 1.0).unwrap(),
        ]
    }

    #[test]
    fn reference_set_is_self_certifying() {
        for k in suite() {
            let phi = TestFunction::centered(k.dim(), 1.0).unwrap();
            let err = distributional_delta_test(&k, &k.operator(), &phi, 64).unwrap();
            assert!(err < 1e-3, "{k}: {err}");
        }
    }

    #[test]
    fn off_centre_support_and_scaling() {
        let k = ReferenceKernel::Laplace2d;
        let phi = TestFunction::new(vec![0.3, -0.2], 1.2).unwrap();
        assert!(distributional_delta_test(&k, &k.operator(), &phi, 96).unwrap() < 1e-3);
        let doubled = ScaledKernel {
            inner: k.clone(),
            factor: 2.0,
        };
        let err = distributional_delta_test(&doubled, &k.operator(), &phi, 96).unwrap();
        assert!((err - 1.0).abs() < 1e-3, "{err}");
    }

    #[test]
    fn refinement_reduces_error() {
        let k = ReferenceKernel::Laplace3d;
        let phi = TestFunction::centered(3, 1.0).unwrap();
        let e1 = distributional_delta_test(&k, &k.operator(), &phi, 64).unwrap();
        let e2 = distributional_delta_test(&k, &k.operator(), &phi, 128).unwrap();
        assert!(e2 <= e1 / 4.0 || e2 < 1e-10, "{e1} -> {e2}");
    }

    #[test]
    fn delta_test_preconditions() {
        let k = ReferenceKernel::Laplace2d;
        let phi = TestFunction::centered(2, 1.0).unwrap();
        assert!(distributional_delta_test(&k, &k.operator(), &phi, 16).is_err());
        let far = TestFunction::new(vec![2.0, 0.0], 1.0).unwrap();
        assert!(distributional_delta_test(&k, &k.operator(), &far, 64).is_err());
    }

    struct Corrupted;

    impl KernelHandle for Corrupted {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, z: &[f64]) -> Result<f64> {
            Ok(ReferenceKernel::Laplace2d.value(z)? + 0.01 * z[0].powi(3))
        }
        fn derivative(&self, z: &[f64], beta: &MultiIndex) -> Result<f64> {
            if beta.order() == 0 {
                self.value(z)
            } else {
                Err(Error::MissingDerivative(beta.entries().to_vec()))
            }
        }
    }

    #[test]
    fn residual_scans() {
        let lap = Operator::laplacian(2);
        assert!(residual_scan(&ReferenceKernel::Laplace2d, &lap, (0.3, 1.5), 50).unwrap() < 1e-6);
        let bih = Operator::polyharmonic(2, 2);
        assert!(
            residual_scan(&ReferenceKernel::Biharmonic2d, &bih, (0.3, 1.5), 50).unwrap() < 1e-4
        );
        // Delta(0.01 x1^3) = 0.06 x1.
        let bad = residual_scan(&Corrupted, &lap, (0.3, 1.5), 50).unwrap();
        assert!(bad > 0.01, "{bad}");
    }

    #[test]
    fn log_fit_separates_dimensions() {
        let fit3 = log_fit(&ReferenceKernel::Laplace3d, -1, 0.2).unwrap();
        assert!(fit3.c2.abs() < 1e-12);
        assert!((fit3.c1 + 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-12);
        let fit2 = log_fit(&ReferenceKernel::Laplace2d, 0, 0.2).unwrap();
        assert!((fit2.c2 - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);
    }
}
