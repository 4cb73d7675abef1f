use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Scalar};

use super::quadrature::{Layout, SphereRule};

/// Number of real orthonormal basis functions of degree `<= l_max`.
pub fn basis_len(n: usize, l_max: usize) -> usize {
    match n {
        2 => 2 * l_max + 1,
        _ => (l_max + 1) * (l_max + 1),
    }
}

/// Flat index of the basis function of degree `l` and order `m`.
///
/// `n = 2`: `m = 0` only for `l = 0`; `m = l` is `cos(l phi)/sqrt(pi)`, `m = -l` is
/// `sin(l phi)/sqrt(pi)`. `n = 3`: `m in -l..=l`, negative orders carry `sin(|m| phi)`.
pub(crate) fn index(n: usize, l: usize, m: i64) -> usize {
    match n {
        2 => {
            if l == 0 {
                0
            } else if m > 0 {
                2 * l - 1
            } else {
                2 * l
            }
        }
        _ => ((l * l + l) as i64 + m) as usize,
    }
}

/// Degree of the basis function stored at `idx`.
pub(crate) fn degree_of(n: usize, idx: usize) -> usize {
    match n {
        2 => idx.div_ceil(2),
        _ => (idx as f64).sqrt().floor() as usize,
    }
}

fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Normalized associated Legendre values `p[l, m]` (4 pi normalization, no Condon–Shortley
/// phase) and `q[l, m] = p[l, m] / sin(theta)` for `m >= 1`.
pub(crate) struct Legendre<T> {
    pub p: Vec<T>,
    pub q: Vec<T>,
}

impl<T: Scalar> Legendre<T> {
    pub fn new(l_max: usize, u: T, s: T) -> Self {
        let size = tri(l_max, l_max) + 1;
        let mut p = vec![T::zero(); size];
        let mut q = vec![T::zero(); size];
        p[0] = T::one() / (lit::<T>(4.0) * T::PI()).sqrt();
        for m in 1..=l_max {
            let f = (from_usize::<T>(2 * m + 1) / from_usize::<T>(2 * m)).sqrt();
            q[tri(m, m)] = f * p[tri(m - 1, m - 1)];
            p[tri(m, m)] = s * q[tri(m, m)];
        }
        for m in 0..l_max {
            let f = from_usize::<T>(2 * m + 3).sqrt() * u;
            p[tri(m + 1, m)] = f * p[tri(m, m)];
            q[tri(m + 1, m)] = f * q[tri(m, m)];
        }
        for m in 0..=l_max {
            let mf: T = from_usize(m);
            for l in m + 2..=l_max {
                let lf: T = from_usize(l);
                let a = ((lit::<T>(4.0) * lf * lf - T::one()) / (lf * lf - mf * mf)).sqrt();
                let lm1 = lf - T::one();
                let b = ((lm1 * lm1 - mf * mf) / (lit::<T>(4.0) * lm1 * lm1 - T::one())).sqrt();
                p[tri(l, m)] = a * (u * p[tri(l - 1, m)] - b * p[tri(l - 2, m)]);
                q[tri(l, m)] = a * (u * q[tri(l - 1, m)] - b * q[tri(l - 2, m)]);
            }
        }
        Legendre { p, q }
    }

    pub fn p(&self, l: usize, m: usize) -> T {
        self.p[tri(l, m)]
    }

    pub fn q(&self, l: usize, m: usize) -> T {
        if m > l {
            T::zero()
        } else {
            self.q[tri(l, m)]
        }
    }

    /// `d p[l, m] / d theta`.
    pub fn dp(&self, l: usize, m: usize, u: T, s: T) -> T {
        let lf: T = from_usize(l);
        if m == 0 {
            if l == 0 {
                return T::zero();
            }
            return -(lf * (lf + T::one())).sqrt() * s * self.q(l, 1);
        }
        let mf: T = from_usize(m);
        let mut out = lf * u * self.q(l, m);
        if l > m {
            let c = ((lit::<T>(2.0) * lf + T::one()) * (lf * lf - mf * mf)
                / (lit::<T>(2.0) * lf - T::one()))
            .sqrt();
            out -= c * self.q(l - 1, m);
        }
        out
    }
}

/// `(cos m phi, sin m phi)` for `m = 0..=l_max`.
fn trig_table<T: Scalar>(l_max: usize, c: T, s: T) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(l_max + 1);
    let (mut cm, mut sm) = (T::one(), T::zero());
    for _ in 0..=l_max {
        out.push((cm, sm));
        let next_c = cm * c - sm * s;
        sm = sm * c + cm * s;
        cm = next_c;
    }
    out
}

/// Spherical angles of a unit vector: `(u = cos theta, sin theta, cos phi, sin phi)`.
fn angles<T: Scalar>(x: &[T]) -> (T, T, T, T) {
    let (a, b, u) = (x[0], x[1], x[2]);
    let s = (a * a + b * b).sqrt();
    if s > T::zero() {
        (u, s, a / s, b / s)
    } else {
        (u, s, T::one(), T::zero())
    }
}

/// All basis functions of degree `<= l_max` at the unit vector `theta`.
pub fn basis_values<T: Scalar>(n: usize, l_max: usize, theta: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); basis_len(n, l_max)];
    if n == 2 {
        let trig = trig_table(l_max, theta[0], theta[1]);
        let inv_pi = T::one() / T::PI().sqrt();
        out[0] = T::one() / (lit::<T>(2.0) * T::PI()).sqrt();
        for l in 1..=l_max {
            out[2 * l - 1] = trig[l].0 * inv_pi;
            out[2 * l] = trig[l].1 * inv_pi;
        }
        return out;
    }
    let (u, s, c, sn) = angles(theta);
    let leg = Legendre::new(l_max, u, s);
    let trig = trig_table(l_max, c, sn);
    let r2 = lit::<T>(2.0).sqrt();
    for l in 0..=l_max {
        out[index(3, l, 0)] = leg.p(l, 0);
        for m in 1..=l {
            let pv = r2 * leg.p(l, m);
            out[index(3, l, m as i64)] = pv * trig[m].0;
            out[index(3, l, -(m as i64))] = pv * trig[m].1;
        }
    }
    out
}

/// Function on the unit sphere as coefficients in the orthonormal real basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<T> {
    n: usize,
    degree_max: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> Expansion<T> {
    pub fn zeros(n: usize, degree_max: usize) -> Self {
        Expansion {
            n,
            degree_max,
            coeffs: vec![T::zero(); basis_len(n, degree_max)],
        }
    }

    pub fn from_coefficients(n: usize, degree_max: usize, coeffs: Vec<T>) -> Result<Self> {
        super::check_dim(n)?;
        if coeffs.len() != basis_len(n, degree_max) {
            return Err(Error::invalid(
                "coeffs",
                format!("expected {} coefficients", basis_len(n, degree_max)),
            ));
        }
        Ok(Expansion {
            n,
            degree_max,
            coeffs,
        })
    }

    /// Constant function `value`.
    pub fn constant(n: usize, value: T) -> Self {
        let mut e = Self::zeros(n, 0);
        e.coeffs[0] = value * basis_values::<T>(n, 0, &unit_pole::<T>(n))[0].recip();
        e
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree_max(&self) -> usize {
        self.degree_max
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of degree `l`, order `m` (zero beyond the stored degree).
    pub fn coefficient(&self, l: usize, m: i64) -> T {
        if l > self.degree_max {
            return T::zero();
        }
        self.coeffs[index(self.n, l, m)]
    }

    pub fn set_coefficient(&mut self, l: usize, m: i64, value: T) {
        if l > self.degree_max {
            *self = self.resized(l);
        }
        let i = index(self.n, l, m);
        self.coeffs[i] = value;
    }

    /// Iterator over `(degree, coefficient)`.
    pub fn degree_coefficients(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (degree_of(self.n, i), c))
    }

    /// Copy truncated or zero-padded to `degree_max`.
    pub fn resized(&self, degree_max: usize) -> Self {
        let mut out = Self::zeros(self.n, degree_max);
        let len = out.coeffs.len().min(self.coeffs.len());
        out.coeffs[..len].copy_from_slice(&self.coeffs[..len]);
        out
    }

    pub fn evaluate(&self, theta: &[T]) -> T {
        match self.n {
            2 => {
                let trig = trig_table(self.degree_max, theta[0], theta[1]);
                let inv_pi = T::one() / T::PI().sqrt();
                let mut acc = T::zero();
                for l in 1..=self.degree_max {
                    acc += self.coeffs[2 * l - 1] * trig[l].0 + self.coeffs[2 * l] * trig[l].1;
                }
                acc * inv_pi + self.coeffs[0] / (lit::<T>(2.0) * T::PI()).sqrt()
            }
            _ => {
                let (u, s, c, sn) = angles(theta);
                let leg = Legendre::new(self.degree_max, u, s);
                let trig = trig_table(self.degree_max, c, sn);
                let r2 = lit::<T>(2.0).sqrt();
                let mut acc = T::zero();
                for l in 0..=self.degree_max {
                    let base = l * l + l;
                    acc += self.coeffs[base] * leg.p(l, 0);
                    for (m, &(cm, sm)) in trig.iter().enumerate().take(l + 1).skip(1) {
                        let pv = r2 * leg.p(l, m);
                        acc += pv * (self.coeffs[base + m] * cm + self.coeffs[base - m] * sm);
                    }
                }
                acc
            }
        }
    }

    /// Tangential gradient at `theta`: the Günter derivatives `(D_1 f, ..., D_n f)`.
    pub fn gradient(&self, theta: &[T]) -> Vec<T> {
        match self.n {
            2 => {
                let trig = trig_table(self.degree_max, theta[0], theta[1]);
                let inv_pi = T::one() / T::PI().sqrt();
                let mut dphi = T::zero();
                for l in 1..=self.degree_max {
                    let lf: T = from_usize(l);
                    dphi +=
                        lf * (self.coeffs[2 * l] * trig[l].0 - self.coeffs[2 * l - 1] * trig[l].1);
                }
                dphi *= inv_pi;
                vec![-theta[1] * dphi, theta[0] * dphi]
            }
            _ => {
                let (u, s, c, sn) = angles(theta);
                let leg = Legendre::new(self.degree_max, u, s);
                let trig = trig_table(self.degree_max, c, sn);
                let r2 = lit::<T>(2.0).sqrt();
                let (mut d_theta, mut d_phi) = (T::zero(), T::zero());
                for l in 0..=self.degree_max {
                    let base = l * l + l;
                    d_theta += self.coeffs[base] * leg.dp(l, 0, u, s);
                    for (m, &(cm, sm)) in trig.iter().enumerate().take(l + 1).skip(1) {
                        let (a, b) = (self.coeffs[base + m], self.coeffs[base - m]);
                        d_theta += r2 * leg.dp(l, m, u, s) * (a * cm + b * sm);
                        let mf: T = from_usize(m);
                        d_phi += r2 * mf * leg.q(l, m) * (b * cm - a * sm);
                    }
                }
                let e_theta = [u * c, u * sn, -s];
                let e_phi = [-sn, c, T::zero()];
                (0..3)
                    .map(|i| e_theta[i] * d_theta + e_phi[i] * d_phi)
                    .collect()
            }
        }
    }

    /// Günter derivative `D_j f(theta)`.
    pub fn gunter_derivative(&self, theta: &[T], j: usize) -> T {
        self.gradient(theta)[j]
    }

    /// `sqrt(sum of squared coefficients of degree l)`.
    pub fn degree_mass(&self, l: usize) -> T {
        self.degree_coefficients()
            .filter(|(d, _)| *d == l)
            .map(|(_, c)| c * c)
            .sum::<T>()
            .sqrt()
    }

    /// L2 norm on the sphere.
    pub fn norm(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum::<T>().sqrt()
    }

    pub fn max_abs_coefficient(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    /// Mass carried by degrees whose parity differs from `parity`.
    pub fn wrong_parity_mass(&self, parity: usize) -> T {
        self.degree_coefficients()
            .filter(|(d, _)| d % 2 != parity % 2)
            .map(|(_, c)| c * c)
            .sum::<T>()
            .sqrt()
    }

    /// `Some(0)` / `Some(1)` if only even / odd degrees carry mass above `tol`.
    pub fn parity(&self, tol: T) -> Option<usize> {
        let even = self.wrong_parity_mass(1) > tol;
        let odd = self.wrong_parity_mass(0) > tol;
        match (even, odd) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            (false, false) => Some(0),
            (true, true) => None,
        }
    }

    /// Each degree-`l` block multiplied by `factor(l)`.
    pub fn map_degrees(&self, factor: impl Fn(usize) -> T) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c *= factor(degree_of(self.n, i));
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        self.map_degrees(|_| s)
    }

    /// `self + s * other`, widened to the larger degree.
    pub fn add_scaled(&self, other: &Self, s: T) -> Self {
        let l = self.degree_max.max(other.degree_max);
        let mut out = self.resized(l);
        for (o, &c) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o += s * c;
        }
        out
    }

    /// Coefficients with magnitude below `cutoff` set to exact zero.
    pub fn chop(&self, cutoff: T) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            if c.abs() < cutoff {
                *c = T::zero();
            }
        }
        out
    }

    /// Highest degree with a nonzero coefficient.
    pub fn effective_degree(&self) -> usize {
        self.degree_coefficients()
            .filter(|(_, c)| *c != T::zero())
            .map(|(d, _)| d)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == T::zero())
    }
}

fn unit_pole<T: Scalar>(n: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[n - 1] = T::one();
    v
}

/// Discrete inner products of nodal samples with the basis up to degree `l_max`.
pub fn forward_transform<T: Scalar>(
    rule: &SphereRule<T>,
    samples: &[T],
    l_max: usize,
) -> Result<Expansion<T>> {
    if samples.len() != rule.len() {
        return Err(Error::invalid(
            "samples",
            "sample count differs from node count",
        ));
    }
    if rule.order() < 2 * l_max {
        return Err(Error::AliasingRisk {
            order: rule.order(),
            required: 2 * l_max,
        });
    }
    let n = rule.dim();
    let mut out = Expansion::zeros(n, l_max);
    match rule.layout() {
        Layout::Circle { .. } => {
            for (x, (&w, &f)) in rule.nodes().zip(rule.weights().iter().zip(samples)) {
                let basis = basis_values(2, l_max, x);
                for (c, b) in out.coeffs.iter_mut().zip(basis) {
                    *c += w * f * b;
                }
            }
        }
        Layout::Rings {
            polar,
            polar_weights,
            azimuth,
        } => {
            let dphi = lit::<T>(2.0) * T::PI() / from_usize(*azimuth);
            let r2 = lit::<T>(2.0).sqrt();
            for (ring, (&u, &wu)) in polar.iter().zip(polar_weights).enumerate() {
                let mut cs = vec![(T::zero(), T::zero()); l_max + 1];
                for j in 0..*azimuth {
                    let x = rule.node(ring * azimuth + j);
                    let (_, _, c, s) = angles(x);
                    let f = samples[ring * azimuth + j] * dphi;
                    for (acc, (cm, sm)) in cs.iter_mut().zip(trig_table(l_max, c, s)) {
                        acc.0 += f * cm;
                        acc.1 += f * sm;
                    }
                }
                let s = (T::one() - u * u).max(T::zero()).sqrt();
                let leg = Legendre::new(l_max, u, s);
                for l in 0..=l_max {
                    let base = l * l + l;
                    out.coeffs[base] += wu * leg.p(l, 0) * cs[0].0;
                    for (m, &(cm, sm)) in cs.iter().enumerate().take(l + 1).skip(1) {
                        let pv = wu * r2 * leg.p(l, m);
                        out.coeffs[base + m] += pv * cm;
                        out.coeffs[base - m] += pv * sm;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Value of an expansion at a unit vector.
pub fn synthesize<T: Scalar>(e: &Expansion<T>, theta: &[T]) -> T {
    e.evaluate(theta)
}

#[cfg(test)]
mod tests {
    use super::super::quadrature::build_quadrature;
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn orthonormal_bases() {
        for (n, l) in [(2usize, 12usize), (3, 10)] {
            let rule = build_quadrature::<f64>(n, 2 * l + 2).unwrap();
            let len = basis_len(n, l);
            let mut gram = vec![0.0; len * len];
            for (x, &w) in rule.nodes().zip(rule.weights()) {
                let b = basis_values(n, l, x);
                for i in 0..len {
                    for j in 0..len {
                        gram[i * len + j] += w * b[i] * b[j];
                    }
                }
            }
            for i in 0..len {
                for j in 0..len {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (gram[i * len + j] - expect).abs() < 1e-12,
                        "n={n} ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn first_degree_function_has_unit_coefficient() {
        let rule = build_quadrature::<f64>(3, 16).unwrap();
        let samples: Vec<f64> = rule.nodes().map(|x| basis_values(3, 1, x)[2]).collect();
        let e = forward_transform(&rule, &samples, 6).unwrap();
        for (i, &c) in e.coefficients().iter().enumerate() {
            let expect = if i == 2 { 1.0 } else { 0.0 };
            assert!((c - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn cos_squared_on_circle() {
        let rule = build_quadrature::<f64>(2, 16).unwrap();
        let samples: Vec<f64> = rule.nodes().map(|x| x[0] * x[0]).collect();
        let e = forward_transform(&rule, &samples, 8).unwrap();
        for l in 0..=8 {
            let mass = e.degree_mass(l);
            if l == 0 || l == 2 {
                assert!(mass > 0.1);
            } else {
                assert!(mass < 1e-13);
            }
        }
        assert_relative_eq!(e.evaluate(&[0.6, 0.8]), 0.36, epsilon = 1e-13);
    }

    #[test]
    fn aliasing_is_refused() {
        let rule = build_quadrature::<f64>(2, 10).unwrap();
        let samples = vec![1.0; rule.len()];
        assert!(matches!(
            forward_transform(&rule, &samples, 6),
            Err(Error::AliasingRisk { .. })
        ));
    }

    #[test]
    fn constant_expansion() {
        for n in [2, 3] {
            let e = Expansion::<f64>::constant(n, 2.5);
            let x = if n == 2 {
                vec![0.6, 0.8]
            } else {
                vec![0.0, 0.6, 0.8]
            };
            assert_relative_eq!(e.evaluate(&x), 2.5, epsilon = 1e-14);
            assert!(e.gradient(&x).iter().all(|g| g.abs() < 1e-14));
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let coeffs: Vec<f64> = (0..basis_len(3, 6))
            .map(|i| ((i * 37 % 11) as f64 - 5.0) / 7.0)
            .collect();
        let e = Expansion::from_coefficients(3, 6, coeffs).unwrap();
        // Degree-0 homogeneous extension G(x) = f(x/|x|).
        let g = |x: &[f64]| {
            let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            e.evaluate(&[x[0] / r, x[1] / r, x[2] / r])
        };
        for theta in [
            [0.36, 0.48, 0.8],
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0],
            [-0.6, 0.0, -0.8],
        ] {
            let grad = e.gradient(&theta);
            for j in 0..3 {
                let h = 1e-5;
                let mut xp = theta;
                let mut xm = theta;
                xp[j] += h;
                xm[j] -= h;
                let fd = (g(&xp) - g(&xm)) / (2.0 * h);
                assert!(
                    (grad[j] - fd).abs() < 1e-7,
                    "{theta:?} axis {j}: {} vs {fd}",
                    grad[j]
                );
            }
            let tangency: f64 = grad.iter().zip(theta).map(|(a, b)| a * b).sum();
            assert!(tangency.abs() < 1e-12);
        }
    }

    #[test]
    fn single_precision_transform() {
        let rule = build_quadrature::<f32>(2, 12).unwrap();
        let samples: Vec<f32> = rule.nodes().map(|x| x[0] * x[1]).collect();
        let e = forward_transform(&rule, &samples, 4).unwrap();
        assert!((e.evaluate(&[0.6, 0.8]) - 0.48).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn round_trip_and_parseval(seed in proptest::collection::vec(-1.0f64..1.0, 49), n in 2usize..=3) {
            let l = 6;
            let len = basis_len(n, l);
            let e = Expansion::from_coefficients(n, l, seed[..len].to_vec()).unwrap();
            let rule = build_quadrature::<f64>(n, 2 * l).unwrap();
            let samples: Vec<f64> = rule.nodes().map(|x| e.evaluate(x)).collect();
            let back = forward_transform(&rule, &samples, l).unwrap();
            for (a, b) in back.coefficients().iter().zip(e.coefficients()) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            let l2: f64 = rule.integrate(|x| e.evaluate(x).powi(2));
            prop_assert!((l2 - e.norm().powi(2)).abs() < 1e-8);
        }

        #[test]
        fn even_expansions_are_bitwise_symmetric(seed in proptest::collection::vec(-1.0f64..1.0, 49), n in 2usize..=3) {
            let l = 6;
            let len = basis_len(n, l);
            let e = Expansion::from_coefficients(n, l, seed[..len].to_vec()).unwrap()
                .map_degrees(|d| if d % 2 == 0 { 1.0 } else { 0.0 });
            let rule = build_quadrature::<f64>(n, 2 * l).unwrap();
            for i in 0..rule.len() {
                prop_assert_eq!(e.evaluate(rule.node(i)), e.evaluate(rule.node(rule.antipode(i))));
            }
        }
    }
}
