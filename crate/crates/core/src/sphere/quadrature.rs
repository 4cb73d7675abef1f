use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::scalar::{from_usize, lit, Scalar};

use super::check_dim;

/// How the nodes of a [`SphereRule`] are arranged.
#[derive(Debug, Clone, PartialEq)]
pub enum Layout<T> {
    /// `count` equispaced angles `2 pi i / count` on the circle.
    Circle { count: usize },
    /// Rings of constant `u = cos(polar angle)` (Gauss–Legendre), each with `azimuth`
    /// equispaced points; node `(i, j)` is stored at `i * azimuth + j`.
    Rings {
        polar: Vec<T>,
        polar_weights: Vec<T>,
        azimuth: usize,
    },
}

/// Nodes and positive weights on the unit sphere of `R^n`, closed under `xi -> -xi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule<T> {
    n: usize,
    order: usize,
    nodes: Vec<T>,
    weights: Vec<T>,
    layout: Layout<T>,
}

impl<T: Scalar> SphereRule<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Polynomial degree integrated exactly.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[T] {
        &self.nodes[i * self.n..(i + 1) * self.n]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[T]> {
        self.nodes.chunks(self.n)
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn layout(&self) -> &Layout<T> {
        &self.layout
    }

    /// Index of the node `-xi_i`.
    pub fn antipode(&self, i: usize) -> usize {
        match &self.layout {
            Layout::Circle { count } => (i + count / 2) % count,
            Layout::Rings { polar, azimuth, .. } => {
                let (ring, j) = (i / azimuth, i % azimuth);
                (polar.len() - 1 - ring) * azimuth + (j + azimuth / 2) % azimuth
            }
        }
    }

    pub fn integrate(&self, f: impl Fn(&[T]) -> T) -> T {
        self.nodes()
            .zip(&self.weights)
            .map(|(x, &w)| w * f(x))
            .sum()
    }
}

/// Product rule exact for spherical polynomials of degree `<= order`.
///
/// `n = 2`: `2 * order` equispaced nodes. `n = 3`: `ceil((order+1)/2)` Gauss–Legendre rings in
/// `cos(polar angle)` times an even number `>= order + 1` of azimuthal nodes.
pub fn build_quadrature<T: Scalar>(n: usize, order: usize) -> Result<SphereRule<T>> {
    check_dim(n)?;
    if order < 8 {
        return Err(Error::invalid(
            "order",
            "sphere quadrature order must be at least 8",
        ));
    }
    let two_pi = lit::<T>(2.0) * T::PI();
    if n == 2 {
        let count = 2 * order;
        let step = two_pi / from_usize(count);
        let mut nodes = Vec::with_capacity(2 * count);
        for i in 0..count {
            let (s, c) = (step * from_usize(i)).sin_cos();
            nodes.push(c);
            nodes.push(s);
        }
        // Exact antipodes: node i + count/2 is the negation of node i.
        for i in 0..count / 2 {
            let j = i + count / 2;
            nodes[2 * j] = -nodes[2 * i];
            nodes[2 * j + 1] = -nodes[2 * i + 1];
        }
        return Ok(SphereRule {
            n,
            order,
            nodes,
            weights: vec![step; count],
            layout: Layout::Circle { count },
        });
    }
    let rings = (order + 2) / 2;
    let mut azimuth = order + 1;
    if azimuth % 2 == 1 {
        azimuth += 1;
    }
    let gl = gauss_legendre::<T>(rings);
    let dphi = two_pi / from_usize(azimuth);
    let trig: Vec<(T, T)> = (0..azimuth)
        .map(|j| {
            let (s, c) = (dphi * from_usize(j)).sin_cos();
            (c, s)
        })
        .collect();
    let mut trig = trig;
    for j in 0..azimuth / 2 {
        let (c, s) = trig[j];
        trig[j + azimuth / 2] = (-c, -s);
    }
    let mut nodes = Vec::with_capacity(3 * rings * azimuth);
    let mut weights = Vec::with_capacity(rings * azimuth);
    for (&u, &w) in gl.nodes.iter().zip(&gl.weights) {
        let st = (T::one() - u * u).max(T::zero()).sqrt();
        for &(c, s) in &trig {
            nodes.extend([st * c, st * s, u]);
            weights.push(w * dphi);
        }
    }
    Ok(SphereRule {
        n,
        order,
        nodes,
        weights,
        layout: Layout::Rings {
            polar: gl.nodes,
            polar_weights: gl.weights,
            azimuth,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn areas_and_moments() {
        let q2 = build_quadrature::<f64>(2, 8).unwrap();
        assert_relative_eq!(q2.integrate(|_| 1.0), 2.0 * PI, epsilon = 1e-12);
        assert_relative_eq!(q2.integrate(|x| x[0] * x[0]), PI, epsilon = 1e-12);
        let q3 = build_quadrature::<f64>(3, 8).unwrap();
        assert_relative_eq!(q3.integrate(|_| 1.0), 4.0 * PI, epsilon = 1e-12);
        assert_relative_eq!(
            q3.integrate(|x| x[2].powi(2) * x[0].powi(2)),
            4.0 * PI / 15.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            q3.integrate(|x| x[0].powi(8)),
            4.0 * PI / 9.0,
            epsilon = 1e-12
        );
        assert!(build_quadrature::<f64>(4, 8).is_err());
        assert!(build_quadrature::<f64>(2, 4).is_err());
    }

    #[test]
    fn antipodal_symmetry_is_exact() {
        for (n, order) in [(2, 9), (2, 16), (3, 9), (3, 20)] {
            let q = build_quadrature::<f64>(n, order).unwrap();
            for i in 0..q.len() {
                let j = q.antipode(i);
                for (a, b) in q.node(i).iter().zip(q.node(j)) {
                    assert_eq!(*a, -*b);
                }
                assert_eq!(q.weights()[i], q.weights()[j]);
            }
        }
    }

    #[test]
    fn unit_nodes() {
        let q = build_quadrature::<f64>(3, 12).unwrap();
        for x in q.nodes() {
            assert_relative_eq!(x.iter().map(|v| v * v).sum::<f64>(), 1.0, epsilon = 1e-14);
        }
    }
}
