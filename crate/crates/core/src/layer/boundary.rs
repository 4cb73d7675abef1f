//! Closed boundaries given by analytic parametrizations, with Nyström nodes and weights.
//!
//! Curves (`n = 2`) are sampled at `N` equispaced parameters `t_i = 2 pi i / N` and use the
//! trapezoid rule, which is spectrally accurate for smooth periodic integrands. The ellipsoid
//! (`n = 3`) is the image of the unit sphere under `diag(a, b, c)` and inherits the product
//! Gauss–Legendre/trapezoid rule of [`build_quadrature`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sphere::{build_quadrature, SphereRule};

/// Named analytic shapes. Curves are traversed counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `radius (cos t, sin t)`.
    Circle { radius: f64 },
    /// `(a cos t, b sin t)`.
    Ellipse { a: f64, b: f64 },
    /// `radius (1 + epsilon cos(lobes t)) (cos t, sin t)`.
    Star {
        radius: f64,
        epsilon: f64,
        lobes: u32,
    },
    /// `diag(a, b, c) omega` for `omega` on the unit sphere.
    Ellipsoid { a: f64, b: f64, c: f64 },
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Ellipsoid { .. } => 3,
            _ => 2,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, "must be positive and finite"))
            }
        };
        match *self {
            Shape::Circle { radius } => positive("radius", radius),
            Shape::Ellipse { a, b } => positive("a", a).and(positive("b", b)),
            Shape::Star {
                radius,
                epsilon,
                lobes,
            } => {
                positive("radius", radius)?;
                if !(epsilon.is_finite() && epsilon.abs() < 1.0) {
                    return Err(Error::invalid(
                        "epsilon",
                        "star amplitude must satisfy |epsilon| < 1",
                    ));
                }
                if lobes == 0 {
                    return Err(Error::invalid("lobes", "must be at least 1"));
                }
                Ok(())
            }
            Shape::Ellipsoid { a, b, c } => {
                positive("a", a).and(positive("b", b)).and(positive("c", c))
            }
        }
    }

    /// `(gamma, gamma', gamma'')` of a curve at parameter `t`.
    pub fn curve(&self, t: f64) -> [[f64; 2]; 3] {
        let (s, c) = t.sin_cos();
        match *self {
            Shape::Circle { radius } => [
                [radius * c, radius * s],
                [-radius * s, radius * c],
                [-radius * c, -radius * s],
            ],
            Shape::Ellipse { a, b } => [[a * c, b * s], [-a * s, b * c], [-a * c, -b * s]],
            Shape::Star {
                radius,
                epsilon,
                lobes,
            } => {
                let m = lobes as f64;
                let (sm, cm) = (m * t).sin_cos();
                let r = radius * (1.0 + epsilon * cm);
                let dr = -radius * epsilon * m * sm;
                let ddr = -radius * epsilon * m * m * cm;
                [
                    [r * c, r * s],
                    [dr * c - r * s, dr * s + r * c],
                    [
                        ddr * c - 2.0 * dr * s - r * c,
                        ddr * s + 2.0 * dr * c - r * s,
                    ],
                ]
            }
            Shape::Ellipsoid { .. } => panic!("curve data requested for a surface"),
        }
    }

    /// Largest distance from the shape's centre to a boundary point.
    pub fn circumradius(&self) -> f64 {
        match *self {
            Shape::Circle { radius } => radius,
            Shape::Ellipse { a, b } => a.max(b),
            Shape::Star {
                radius, epsilon, ..
            } => radius * (1.0 + epsilon.abs()),
            Shape::Ellipsoid { a, b, c } => a.max(b).max(c),
        }
    }
}

/// Declared regularity class `C^{m, lambda}` of a boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularity {
    pub m: u32,
    pub lambda: f64,
}

impl Regularity {
    /// Real-analytic shapes are recorded with `m = u32::MAX`.
    pub const ANALYTIC: Regularity = Regularity {
        m: u32::MAX,
        lambda: 1.0,
    };
}

/// A discretized closed boundary: parameters, points, outward unit normals and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBoundary {
    shape: Shape,
    center: Vec<f64>,
    resolution: usize,
    params: Vec<Vec<f64>>,
    points: Vec<Vec<f64>>,
    normals: Vec<Vec<f64>>,
    weights: Vec<f64>,
    spacing: f64,
    max_spacing: f64,
    rule: Option<SphereRule<f64>>,
}

impl ParamBoundary {
    /// `resolution` is the node count for curves and the sphere-rule order for the ellipsoid.
    pub fn new(shape: Shape, center: Vec<f64>, resolution: usize) -> Result<Self> {
        shape.validate()?;
        let n = shape.dim();
        if center.len() != n {
            return Err(Error::invalid(
                "center",
                format!("expected {n} coordinates"),
            ));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("center", "coordinates must be finite"));
        }
        if resolution < 8 {
            return Err(Error::invalid("nodes", "at least 8 nodes are required"));
        }
        let mut b = ParamBoundary {
            shape,
            center,
            resolution,
            params: Vec::new(),
            points: Vec::new(),
            normals: Vec::new(),
            weights: Vec::new(),
            spacing: 0.0,
            max_spacing: 0.0,
            rule: None,
        };
        if n == 2 {
            b.sample_curve();
        } else {
            b.sample_ellipsoid()?;
        }
        Ok(b)
    }

    pub fn circle(radius: f64, nodes: usize) -> Result<Self> {
        Self::new(Shape::Circle { radius }, vec![0.0, 0.0], nodes)
    }

    pub fn ellipse(a: f64, b: f64, nodes: usize) -> Result<Self> {
        Self::new(Shape::Ellipse { a, b }, vec![0.0, 0.0], nodes)
    }

    pub fn star(radius: f64, epsilon: f64, lobes: u32, nodes: usize) -> Result<Self> {
        Self::new(
            Shape::Star {
                radius,
                epsilon,
                lobes,
            },
            vec![0.0, 0.0],
            nodes,
        )
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64, order: usize) -> Result<Self> {
        Self::new(Shape::Ellipsoid { a, b, c }, vec![0.0; 3], order)
    }

    fn sample_curve(&mut self) {
        let n = self.resolution;
        let dt = 2.0 * PI / n as f64;
        for i in 0..n {
            let t = dt * i as f64;
            let [g, dg, _] = self.shape.curve(t);
            let speed = dg[0].hypot(dg[1]);
            self.params.push(vec![t]);
            self.points
                .push(vec![g[0] + self.center[0], g[1] + self.center[1]]);
            self.normals.push(vec![dg[1] / speed, -dg[0] / speed]);
            self.weights.push(speed * dt);
        }
        let gaps: Vec<f64> = (0..n)
            .map(|i| dist(&self.points[i], &self.points[(i + 1) % n]))
            .collect();
        self.spacing = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        self.max_spacing = gaps.iter().copied().fold(0.0, f64::max);
    }

    fn sample_ellipsoid(&mut self) -> Result<()> {
        let Shape::Ellipsoid { a, b, c } = self.shape else {
            unreachable!()
        };
        let rule = build_quadrature::<f64>(3, self.resolution)?;
        let scale = [a, b, c];
        for (omega, &w) in rule.nodes().zip(rule.weights()) {
            let grad: Vec<f64> = omega.iter().zip(scale).map(|(o, s)| o / s).collect();
            let g = norm(&grad);
            self.params.push(omega.to_vec());
            self.points.push(
                omega
                    .iter()
                    .zip(scale)
                    .zip(&self.center)
                    .map(|((o, s), c)| o * s + c)
                    .collect(),
            );
            self.normals.push(grad.iter().map(|v| v / g).collect());
            // Area element of x = D omega relative to the sphere: det(D) |D^{-1} omega|.
            self.weights.push(w * a * b * c * g);
        }
        let crate::sphere::Layout::Rings { azimuth, polar, .. } = rule.layout() else {
            unreachable!()
        };
        let (az, rings) = (*azimuth, polar.len());
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..rings {
            for j in 0..az {
                let p = &self.points[i * az + j];
                let mut gaps = vec![dist(p, &self.points[i * az + (j + 1) % az])];
                if i + 1 < rings {
                    gaps.push(dist(p, &self.points[(i + 1) * az + j]));
                }
                for d in gaps {
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
        }
        self.spacing = lo;
        self.max_spacing = hi;
        self.rule = Some(rule);
        Ok(())
    }

    /// The same shape sampled at another resolution.
    pub fn refined(&self, resolution: usize) -> Result<Self> {
        Self::new(self.shape.clone(), self.center.clone(), resolution)
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Parameter of node `i`: `[t]` on curves, the unit vector `omega` on the ellipsoid.
    pub fn param(&self, i: usize) -> &[f64] {
        &self.params[i]
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn normal(&self, i: usize) -> &[f64] {
        &self.normals[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Smallest distance between neighbouring nodes (`h_grid`).
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Largest distance between neighbouring nodes.
    pub fn max_spacing(&self) -> f64 {
        self.max_spacing
    }

    pub fn regularity(&self) -> Regularity {
        Regularity::ANALYTIC
    }

    pub fn circumradius(&self) -> f64 {
        self.shape.circumradius()
    }

    /// Radius of the ball about the centre to which exterior checks are confined: four
    /// circumradii.
    pub fn check_radius(&self) -> f64 {
        4.0 * self.circumradius()
    }

    /// Perimeter (`n = 2`) or area (`n = 3`) by the node weights.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub(crate) fn sphere_rule(&self) -> Option<&SphereRule<f64>> {
        self.rule.as_ref()
    }

    /// Distance from `x` to the boundary. Curves refine the nearest node by a golden-section
    /// search in the parameter; the ellipsoid uses the nearest node.
    pub fn distance(&self, x: &[f64]) -> f64 {
        let (best, d0) = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dist(p, x)))
            .fold(
                (0, f64::INFINITY),
                |acc, v| if v.1 < acc.1 { v } else { acc },
            );
        if self.dim() != 2 {
            return d0;
        }
        let dt = 2.0 * PI / self.resolution as f64;
        let t0 = self.params[best][0];
        let at = |t: f64| {
            let [g, _, _] = self.shape.curve(t);
            (g[0] + self.center[0] - x[0]).hypot(g[1] + self.center[1] - x[1])
        };
        let (mut lo, mut hi) = (t0 - dt, t0 + dt);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - phi * (hi - lo);
        let mut d = lo + phi * (hi - lo);
        let (mut fc, mut fd) = (at(c), at(d));
        for _ in 0..80 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - phi * (hi - lo);
                fc = at(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + phi * (hi - lo);
                fd = at(d);
            }
        }
        d0.min(fc).min(fd)
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
