use num_complex::Complex;

use crate::error::{Error, Result};
use crate::operator::{check_elliptic, Operator};
use crate::scalar::{factorial, from_usize, lit, Scalar};

const MIN_NODES: usize = 64;
const MAX_NODES: usize = 4096;
const AGREEMENT: f64 = 1e-12;
const ZERO_CUTOFF: f64 = 1e-14;
const NODE_FLOOR: f64 = 1e-12;
const IMAG_TOL: f64 = 1e-10;

/// `max(x, factor * eps)`: a double-precision tolerance that stays meaningful in lower precision.
fn tol<T: Scalar>(x: f64, factor: f64) -> T {
    lit::<T>(x).max(T::epsilon() * lit(factor))
}

/// Trapezoid contour `|z| = radius` with `nodes` equispaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec<T> {
    pub radius: T,
    pub nodes: usize,
}

impl<T: Scalar> ContourSpec<T> {
    pub fn new(radius: T, nodes: usize) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::invalid("radius", "contour radius must be positive"));
        }
        if nodes < MIN_NODES || nodes % 2 == 1 {
            return Err(Error::invalid(
                "nodes",
                "contour needs an even node count of at least 64",
            ));
        }
        Ok(ContourSpec { radius, nodes })
    }

    /// Radius from [`contour_radius`] with the minimum node count.
    pub fn for_operator(a: &Operator<T>) -> Result<Self> {
        Self::new(contour_radius(a)?, MIN_NODES)
    }

    /// Checks the radius against `1 + mass / margin`, outside which `P(z xi)` has no zeros.
    pub fn validate(&self, a: &Operator<T>, margin: T) -> Result<()> {
        let needed = T::one() + a.lower_order_mass() / margin;
        if self.radius < needed {
            return Err(Error::invalid(
                "radius",
                format!(
                    "radius {} is below the zero-free bound {}",
                    self.radius, needed
                ),
            ));
        }
        Ok(())
    }

    fn nodes_at(&self, count: usize) -> Vec<Complex<T>> {
        let step = lit::<T>(2.0) * T::PI() / from_usize(count);
        (0..count)
            .map(|s| Complex::from_polar(self.radius, step * from_usize(s)))
            .collect()
    }
}

/// `2 max(1, 1 + sum_{|alpha| < 2k} |a_alpha| / margin)`.
pub fn contour_radius<T: Scalar>(a: &Operator<T>) -> Result<T> {
    let margin = check_elliptic(a)?;
    Ok(radius_from_margin(a, margin))
}

fn radius_from_margin<T: Scalar>(a: &Operator<T>, margin: T) -> T {
    lit::<T>(2.0) * T::one().max(T::one() + a.lower_order_mass() / margin)
}

/// `l (1 + l^2)^{j + 1 - 2k}`, the coefficient bound for operators of class `l`.
pub fn truncation_bound<T: Scalar>(l: u32, j: usize, k: u32) -> T {
    let lf: T = lit(l as f64);
    lf * (T::one() + lf * lf).powi(j as i32 + 1 - 2 * k as i32)
}

/// [`truncation_bound`] after checking that `a` belongs to class `l`.
pub fn class_truncation_bound<T: Scalar>(a: &Operator<T>, l: u32, j: usize) -> Result<T> {
    let margin = check_elliptic(a)?;
    let lf: T = lit(l as f64);
    if l == 0 || a.lower_order_mass() >= lf {
        return Err(Error::BadClassIndex {
            l,
            reason: format!("lower-order mass {} is not below l", a.lower_order_mass()),
        });
    }
    if margin * lf <= T::one() {
        return Err(Error::BadClassIndex {
            l,
            reason: format!("margin {margin} is not above 1/l"),
        });
    }
    Ok(truncation_bound(l, j, a.k()))
}

/// Unprocessed trapezoid values of the contour integrals for `j = 0..=J`.
#[derive(Debug, Clone)]
pub struct RawContour<T> {
    /// Complex quadrature values of `a_j`.
    pub values: Vec<Complex<T>>,
    /// Cauchy scale `radius^j max |1/P(z xi)|` on the contour: the magnitude of the summands.
    pub scale: Vec<T>,
    /// Node count at which successive doublings agreed.
    pub nodes: usize,
}

fn trapezoid<T: Scalar>(
    parts: &[T],
    spec: &ContourSpec<T>,
    count: usize,
    jmax: usize,
) -> Result<(Vec<Complex<T>>, T)> {
    let mut sums = vec![Complex::new(T::zero(), T::zero()); jmax + 1];
    let mut max_inv = T::zero();
    let floor: T = lit(NODE_FLOOR);
    for z in spec.nodes_at(count) {
        let p = parts
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c);
        let modulus = p.norm();
        if modulus < floor {
            return Err(Error::ContourTooSmall {
                radius: spec.radius.to_f64().unwrap_or(f64::NAN),
                modulus: modulus.to_f64().unwrap_or(0.0),
            });
        }
        max_inv = max_inv.max(T::one() / modulus);
        let mut term = p.inv();
        for s in sums.iter_mut() {
            *s = *s + term;
            term = term * z;
        }
    }
    let inv_count = T::one() / from_usize(count);
    Ok((sums.into_iter().map(|s| s * inv_count).collect(), max_inv))
}

/// Contour values of `a_0..a_J` with node doubling until two levels agree to 1e-12 in units of
/// the Cauchy scale (capped at 4096 nodes).
pub fn contour_coefficients<T: Scalar>(
    a: &Operator<T>,
    xi: &[T],
    jmax: usize,
    spec: &ContourSpec<T>,
) -> Result<RawContour<T>> {
    let parts = a.homogeneous_parts(xi);
    let mut count = spec.nodes.max(MIN_NODES);
    let (mut prev, mut max_inv) = trapezoid(&parts, spec, count, jmax)?;
    let tol: T = tol(AGREEMENT, 100.0);
    loop {
        let next_count = count * 2;
        if next_count > MAX_NODES {
            break;
        }
        let (next, inv) = trapezoid(&parts, spec, next_count, jmax)?;
        max_inv = max_inv.max(inv);
        let agreed = prev
            .iter()
            .zip(&next)
            .enumerate()
            .all(|(j, (p, q))| (p - q).norm() <= tol * spec.radius.powi(j as i32) * max_inv);
        prev = next;
        count = next_count;
        if agreed {
            break;
        }
    }
    let scale = (0..=jmax)
        .map(|j| spec.radius.powi(j as i32) * max_inv)
        .collect();
    Ok(RawContour {
        values: prev,
        scale,
        nodes: count,
    })
}

/// Taylor coefficients `a_0..a_J` of `v` in `s`, for one direction `xi`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWave<T> {
    pub xi: Vec<T>,
    pub k: u32,
    /// `a_j`, `j = 0..=J`; exact zeros below the cutoff.
    pub coeffs: Vec<T>,
    /// Class-`l` bound on `|a_j|` for every `j > J`'s first term, `l (1+l^2)^{J+2-2k}`.
    pub tail_bound: T,
    pub class_index: u32,
}

impl<T: Scalar> PlaneWave<T> {
    /// Truncation order `J`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `v` as the truncated series `sum_j a_j s^j / j!`.
    pub fn v_series(&self, s: T) -> T {
        let two_k = 2 * self.k as usize;
        s.powi(two_k as i32) * self.w(s)
    }

    /// `w(s) = sum_{j >= 2k} a_j s^{j - 2k} / j!`.
    pub fn w(&self, s: T) -> T {
        let two_k = 2 * self.k as usize;
        if s.abs() < lit(1e-8) {
            return self.coeffs[two_k] / factorial::<T>(two_k);
        }
        // Horner in s over a_j / j!.
        let mut acc = T::zero();
        for j in (two_k..self.coeffs.len()).rev() {
            acc = acc * s + self.coeffs[j] / factorial::<T>(j);
        }
        acc
    }

    /// Bound on `sum_{j > J} |a_j| |s|^j / j!` from the class-`l` estimate.
    pub fn tail_estimate(&self, s: T) -> T {
        let jmax = self.order();
        let mut total = T::zero();
        for j in jmax + 1..jmax + 80 {
            total += truncation_bound::<T>(self.class_index, j, self.k) * s.abs().powi(j as i32)
                / factorial::<T>(j);
        }
        total
    }
}

/// Precomputed contour data for one operator; evaluates the kernel in any direction.
#[derive(Debug, Clone)]
pub struct PlaneWaveSolver<T> {
    a: Operator<T>,
    margin: T,
    class_index: u32,
    contour: ContourSpec<T>,
}

impl<T: Scalar> PlaneWaveSolver<T> {
    pub fn new(a: &Operator<T>) -> Result<Self> {
        let margin = check_elliptic(a)?;
        let contour = ContourSpec::new(radius_from_margin(a, margin), MIN_NODES)?;
        Ok(PlaneWaveSolver {
            a: a.clone(),
            margin,
            class_index: a.class_index(margin),
            contour,
        })
    }

    /// Same operator with a caller-chosen contour (validated against the zero-free bound).
    pub fn with_contour(a: &Operator<T>, contour: ContourSpec<T>) -> Result<Self> {
        let mut s = Self::new(a)?;
        contour.validate(a, s.margin)?;
        s.contour = contour;
        Ok(s)
    }

    pub fn operator(&self) -> &Operator<T> {
        &self.a
    }

    pub fn margin(&self) -> T {
        self.margin
    }

    pub fn class_index(&self) -> u32 {
        self.class_index
    }

    pub fn contour(&self) -> &ContourSpec<T> {
        &self.contour
    }

    pub fn raw(&self, xi: &[T], jmax: usize) -> Result<RawContour<T>> {
        contour_coefficients(&self.a, xi, jmax, &self.contour)
    }

    /// Coefficients `a_0..a_J` with the vanishing and leading-term invariants verified.
    pub fn series(&self, xi: &[T], jmax: usize) -> Result<PlaneWave<T>> {
        let two_k = 2 * self.a.k() as usize;
        if jmax < two_k {
            return Err(Error::invalid("J", "truncation order must be at least 2k"));
        }
        let raw = self.raw(xi, jmax)?;
        let imag_tol: T = tol(IMAG_TOL, 1e3);
        let cutoff: T = tol(ZERO_CUTOFF, 10.0);
        let mut coeffs = Vec::with_capacity(jmax + 1);
        for (j, (v, &scale)) in raw.values.iter().zip(&raw.scale).enumerate() {
            let unit = T::one().max(scale);
            if v.im.abs() > imag_tol * unit {
                return Err(Error::InvariantViolated(format!(
                    "imaginary residue {} in a_{j}",
                    v.im
                )));
            }
            if j < two_k {
                if v.re.abs() > tol(1e-6, 1e6) {
                    return Err(Error::InvariantViolated(format!(
                        "a_{j} = {} should vanish below order 2k",
                        v.re
                    )));
                }
                coeffs.push(T::zero());
            } else if v.re.abs() < cutoff * unit {
                coeffs.push(T::zero());
            } else {
                coeffs.push(v.re);
            }
        }
        let p0 = self.a.principal_symbol(xi);
        if (coeffs[two_k] * p0 - T::one()).abs() > tol(1e-8, 1e4) {
            return Err(Error::InvariantViolated(format!(
                "a_2k P_0 = {} differs from 1",
                coeffs[two_k] * p0
            )));
        }
        Ok(PlaneWave {
            xi: xi.to_vec(),
            k: self.a.k(),
            coeffs,
            tail_bound: truncation_bound(self.class_index, jmax + 1, self.a.k()),
            class_index: self.class_index,
        })
    }

    /// `v(x, xi, t)` by direct trapezoid quadrature of the exponential contour integral.
    pub fn v(&self, x: &[T], xi: &[T], t: T) -> Result<T> {
        let s = x.iter().zip(xi).map(|(&a, &b)| a * b).sum::<T>() - t;
        let parts = self.a.homogeneous_parts(xi);
        let count = self.contour.nodes;
        let mut total = Complex::new(T::zero(), T::zero());
        let mut magnitude = T::zero();
        let floor: T = lit(NODE_FLOOR);
        for z in self.contour.nodes_at(count) {
            let p = parts
                .iter()
                .rev()
                .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c);
            if p.norm() < floor {
                return Err(Error::ContourTooSmall {
                    radius: self.contour.radius.to_f64().unwrap_or(f64::NAN),
                    modulus: p.norm().to_f64().unwrap_or(0.0),
                });
            }
            let term = (z * s).exp() / p;
            magnitude += term.norm();
            total = total + term;
        }
        let inv: T = T::one() / from_usize(count);
        let value = total * inv;
        let unit = T::one().max(magnitude * inv);
        if value.im.abs() > tol::<T>(IMAG_TOL, 1e3) * unit {
            return Err(Error::InvariantViolated(format!(
                "imaginary residue {} in v",
                value.im
            )));
        }
        Ok(value.re)
    }
}

/// `v(x, xi, t)` on the contour `c`.
pub fn v_eval<T: Scalar>(
    a: &Operator<T>,
    x: &[T],
    xi: &[T],
    t: T,
    c: &ContourSpec<T>,
) -> Result<T> {
    PlaneWaveSolver::with_contour(a, *c)?.v(x, xi, t)
}

/// `a_0..a_J` in direction `xi` on the contour `c`.
pub fn series_coefficients<T: Scalar>(
    a: &Operator<T>,
    xi: &[T],
    jmax: usize,
    c: &ContourSpec<T>,
) -> Result<PlaneWave<T>> {
    PlaneWaveSolver::with_contour(a, *c)?.series(xi, jmax)
}

/// `w(s)` from precomputed coefficients.
pub fn w_eval<T: Scalar>(coeffs: &PlaneWave<T>, s: T) -> T {
    coeffs.w(s)
}
