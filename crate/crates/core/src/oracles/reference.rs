//! Closed-form fundamental solutions used as independent references.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::jet::{squared_norm, Jet, JetLayout};
use crate::layer::KernelHandle;
use crate::multi_index::MultiIndex;
use crate::operator::Operator;

use super::bessel::{bessel_k0, bessel_k0_derivatives};

/// Textbook fundamental solutions, each paired with its operator.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceKernel {
    /// `(1/2 pi) log|x|` for `Delta` in `R^2`.
    Laplace2d,
    /// `-1/(4 pi |x|)` for `Delta` in `R^3`.
    Laplace3d,
    /// `(1/8 pi) |x|^2 log|x|` for `Delta^2` in `R^2`.
    Biharmonic2d,
    /// `-(1/2 pi) K_0(kappa |x|)` for `Delta - kappa^2` in `R^2`.
    Yukawa2d { kappa: f64 },
    /// `-exp(-kappa |x|)/(4 pi |x|)` for `Delta - kappa^2` in `R^3`.
    Yukawa3d { kappa: f64 },
    /// `(1/(2 pi sqrt(det A))) log (x^T A^{-1} x)^{1/2}` for `sum a_ij d_i d_j`, `A` symmetric
    /// positive definite, stored as `[a11, a12, a22]`.
    Anisotropic2d { a: [f64; 3] },
}

impl ReferenceKernel {
    pub fn yukawa2d(kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        Ok(ReferenceKernel::Yukawa2d { kappa })
    }

    pub fn yukawa3d(kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        Ok(ReferenceKernel::Yukawa3d { kappa })
    }

    pub fn anisotropic2d(a11: f64, a12: f64, a22: f64) -> Result<Self> {
        if !(a11 > 0.0 && a11 * a22 - a12 * a12 > 0.0)
            || ![a11, a12, a22].iter().all(|v| v.is_finite())
        {
            return Err(Error::invalid(
                "A",
                "matrix must be symmetric positive definite",
            ));
        }
        Ok(ReferenceKernel::Anisotropic2d { a: [a11, a12, a22] })
    }

    /// The operator whose fundamental solution this is.
    pub fn operator(&self) -> Operator<f64> {
        let idx = |v: &[u32]| MultiIndex::new(v.to_vec());
        let build = |n: usize, k: u32, c: Vec<(MultiIndex, f64)>| {
            Operator::new(n, k, c).expect("reference operators are well formed")
        };
        match *self {
            ReferenceKernel::Laplace2d => Operator::laplacian(2),
            ReferenceKernel::Laplace3d => Operator::laplacian(3),
            ReferenceKernel::Biharmonic2d => Operator::polyharmonic(2, 2),
            ReferenceKernel::Yukawa2d { kappa } => build(
                2,
                1,
                vec![
                    (idx(&[2, 0]), 1.0),
                    (idx(&[0, 2]), 1.0),
                    (idx(&[0, 0]), -kappa * kappa),
                ],
            ),
            ReferenceKernel::Yukawa3d { kappa } => build(
                3,
                1,
                vec![
                    (idx(&[2, 0, 0]), 1.0),
                    (idx(&[0, 2, 0]), 1.0),
                    (idx(&[0, 0, 2]), 1.0),
                    (idx(&[0, 0, 0]), -kappa * kappa),
                ],
            ),
            ReferenceKernel::Anisotropic2d { a: [a11, a12, a22] } => build(
                2,
                1,
                vec![
                    (idx(&[2, 0]), a11),
                    (idx(&[1, 1]), 2.0 * a12),
                    (idx(&[0, 2]), a22),
                ],
            ),
        }
    }

    fn space_dim(&self) -> usize {
        match self {
            ReferenceKernel::Laplace3d | ReferenceKernel::Yukawa3d { .. } => 3,
            _ => 2,
        }
    }

    /// Taylor jet of the kernel at `x` to the given degree.
    pub fn jet(&self, x: &[f64], degree: u32) -> Result<Jet<f64>> {
        let n = self.space_dim();
        if x.len() != n {
            return Err(Error::invalid("x", format!("expected {n} coordinates")));
        }
        let r2v: f64 = x.iter().map(|v| v * v).sum();
        if !(r2v > 0.0) || !r2v.is_finite() {
            return Err(Error::invalid(
                "x",
                "reference kernels are singular at the origin",
            ));
        }
        let layout = JetLayout::new(n, degree);
        let vars = Jet::variables(&layout, x);
        let r2 = squared_norm(&vars);
        Ok(match *self {
            ReferenceKernel::Laplace2d => r2.ln().scale(1.0 / (4.0 * PI)),
            ReferenceKernel::Laplace3d => r2.powf(-0.5).scale(-1.0 / (4.0 * PI)),
            ReferenceKernel::Biharmonic2d => r2.mul(&r2.ln()).scale(1.0 / (16.0 * PI)),
            ReferenceKernel::Yukawa2d { kappa } => {
                let kr = r2.sqrt().scale(kappa);
                kr.compose(&bessel_k0_derivatives(kr.value(), degree as usize))
                    .scale(-1.0 / (2.0 * PI))
            }
            ReferenceKernel::Yukawa3d { kappa } => {
                let r = r2.sqrt();
                r.scale(-kappa)
                    .exp()
                    .mul(&r.recip())
                    .scale(-1.0 / (4.0 * PI))
            }
            ReferenceKernel::Anisotropic2d { a: [a11, a12, a22] } => {
                let det = a11 * a22 - a12 * a12;
                // x^T A^{-1} x with A^{-1} = [a22, -a12; -a12, a11] / det.
                let q = vars[0]
                    .mul(&vars[0])
                    .scale(a22)
                    .sub(&vars[0].mul(&vars[1]).scale(2.0 * a12))
                    .add(&vars[1].mul(&vars[1]).scale(a11))
                    .scale(1.0 / det);
                q.ln().scale(1.0 / (4.0 * PI * det.sqrt()))
            }
        })
    }
}

impl ReferenceKernel {
    /// Closed-form first derivatives of the radial kernels.
    fn gradient_component(&self, x: &[f64], beta: &MultiIndex) -> Option<Result<f64>> {
        let axis = beta.entries().iter().position(|&e| e == 1)?;
        if x.len() != self.space_dim() {
            return Some(Err(Error::invalid(
                "x",
                format!("expected {} coordinates", self.space_dim()),
            )));
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if !(r2 > 0.0) || !r2.is_finite() {
            return Some(Err(Error::invalid(
                "x",
                "reference kernels are singular at the origin",
            )));
        }
        let xi = x[axis];
        let v = match *self {
            ReferenceKernel::Laplace2d => xi / (2.0 * PI * r2),
            ReferenceKernel::Laplace3d => xi / (4.0 * PI * r2 * r2.sqrt()),
            ReferenceKernel::Biharmonic2d => xi * (r2.ln() + 1.0) / (8.0 * PI),
            _ => return None,
        };
        Some(Ok(v))
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("kappa", "must be positive and finite"))
    }
}

impl KernelHandle for ReferenceKernel {
    fn dim(&self) -> usize {
        self.space_dim()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let n = self.space_dim();
        if x.len() != n {
            return Err(Error::invalid("x", format!("expected {n} coordinates")));
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid(
                "x",
                "reference kernels are singular at the origin",
            ));
        }
        Ok(match *self {
            ReferenceKernel::Laplace2d => r.ln() / (2.0 * PI),
            ReferenceKernel::Laplace3d => -1.0 / (4.0 * PI * r),
            ReferenceKernel::Biharmonic2d => r * r * r.ln() / (8.0 * PI),
            ReferenceKernel::Yukawa2d { kappa } => -bessel_k0(kappa * r) / (2.0 * PI),
            ReferenceKernel::Yukawa3d { kappa } => -(-kappa * r).exp() / (4.0 * PI * r),
            ReferenceKernel::Anisotropic2d { .. } => self.jet(x, 0)?.value(),
        })
    }

    fn derivative(&self, x: &[f64], beta: &MultiIndex) -> Result<f64> {
        if beta.dim() != self.space_dim() {
            return Err(Error::invalid(
                "beta",
                format!("expected {} entries", self.space_dim()),
            ));
        }
        if beta.order() == 0 {
            return self.value(x);
        }
        if beta.order() == 1 {
            if let Some(v) = self.gradient_component(x, beta) {
                return v;
            }
        }
        Ok(self.jet(x, beta.order())?.derivative(beta))
    }
}

impl fmt::Display for ReferenceKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceKernel::Laplace2d => write!(f, "laplace2d"),
            ReferenceKernel::Laplace3d => write!(f, "laplace3d"),
            ReferenceKernel::Biharmonic2d => write!(f, "biharmonic2d"),
            ReferenceKernel::Yukawa2d { kappa } => write!(f, "yukawa2d({kappa})"),
            ReferenceKernel::Yukawa3d { kappa } => write!(f, "yukawa3d({kappa})"),
            ReferenceKernel::Anisotropic2d { a: [a, b, c] } => {
                write!(f, "anisotropic2d({a},{b},{c})")
            }
        }
    }
}

/// Names as printed by `Display`: `laplace2d`, `yukawa2d(1.5)`, `anisotropic2d(4,0,1)`, ...
impl FromStr for ReferenceKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            Some(_) => return Err(Error::UnknownName(s.to_string())),
            None => (s, None),
        };
        let nums = |expected: usize| -> Result<Vec<f64>> {
            let text = args.ok_or_else(|| {
                Error::invalid("name", format!("`{name}` needs {expected} parameter(s)"))
            })?;
            let v = text
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::invalid("name", format!("bad parameter in `{s}`: {e}")))?;
            if v.len() != expected {
                return Err(Error::invalid(
                    "name",
                    format!("`{name}` needs {expected} parameter(s)"),
                ));
            }
            Ok(v)
        };
        let plain = |k: ReferenceKernel| {
            if args.is_some() {
                Err(Error::invalid(
                    "name",
                    format!("`{name}` takes no parameters"),
                ))
            } else {
                Ok(k)
            }
        };
        match name {
            "laplace2d" => plain(ReferenceKernel::Laplace2d),
            "laplace3d" => plain(ReferenceKernel::Laplace3d),
            "biharmonic2d" => plain(ReferenceKernel::Biharmonic2d),
            "yukawa2d" => ReferenceKernel::yukawa2d(nums(1)?[0]),
            "yukawa3d" => ReferenceKernel::yukawa3d(nums(1)?[0]),
            "anisotropic2d" => {
                let v = nums(3)?;
                ReferenceKernel::anisotropic2d(v[0], v[1], v[2])
            }
            _ => Err(Error::UnknownName(name.to_string())),
        }
    }
}

/// Value of the named reference kernel at `x`.
pub fn closed_form_reference(name: &str, x: &[f64]) -> Result<f64> {
    name.parse::<ReferenceKernel>()?.value(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn documented_values() {
        assert_relative_eq!(
            closed_form_reference("laplace3d", &[1.0, 0.0, 0.0]).unwrap(),
            -0.079_577_471_545_947_67,
            epsilon = 1e-15
        );
        assert_eq!(
            closed_form_reference("biharmonic2d", &[1.0, 0.0]).unwrap(),
            0.0
        );
        assert!(
            closed_form_reference("anisotropic2d(4,0,1)", &[2.0, 0.0])
                .unwrap()
                .abs()
                < 1e-16
        );
        assert_relative_eq!(
            closed_form_reference("laplace2d", &[2.0, 0.0]).unwrap(),
            2f64.ln() / (2.0 * PI),
            epsilon = 1e-15
        );
        assert!(matches!(
            closed_form_reference("helmholtz", &[1.0, 0.0]),
            Err(Error::UnknownName(_))
        ));
        assert!(closed_form_reference("laplace2d", &[0.0, 0.0]).is_err());
        assert!("yukawa2d".parse::<ReferenceKernel>().is_err());
        assert!("anisotropic2d(1,2,1)".parse::<ReferenceKernel>().is_err());
    }

    #[test]
    fn names_round_trip() {
        for k in [
            ReferenceKernel::Laplace2d,
            ReferenceKernel::Biharmonic2d,
            ReferenceKernel::yukawa3d(0.5).unwrap(),
            ReferenceKernel::anisotropic2d(4.0, 0.5, 1.0).unwrap(),
        ] {
            assert_eq!(k.to_string().parse::<ReferenceKernel>().unwrap(), k);
        }
    }

    #[test]
    fn jets_agree_with_values_and_differences() {
        let kernels = [
            ReferenceKernel::Laplace2d,
            ReferenceKernel::Biharmonic2d,
            ReferenceKernel::yukawa2d(1.3).unwrap(),
            ReferenceKernel::anisotropic2d(4.0, 0.5, 1.0).unwrap(),
        ];
        let x = [0.7, -0.4];
        let h = 1e-5;
        for k in &kernels {
            assert_relative_eq!(
                k.jet(&x, 2).unwrap().value(),
                k.value(&x).unwrap(),
                max_relative = 1e-13
            );
            for axis in 0..2 {
                let mut xp = x;
                let mut xm = x;
                xp[axis] += h;
                xm[axis] -= h;
                let fd = (k.value(&xp).unwrap() - k.value(&xm).unwrap()) / (2.0 * h);
                let d = k.derivative(&x, &MultiIndex::unit(2, axis)).unwrap();
                assert_relative_eq!(d, fd, max_relative = 1e-7);
            }
        }
        let k3 = ReferenceKernel::yukawa3d(0.8).unwrap();
        let x3 = [0.3, 0.2, -0.5];
        let mut xp = x3;
        xp[2] += h;
        let mut xm = x3;
        xm[2] -= h;
        let fd = (k3.value(&xp).unwrap() - k3.value(&xm).unwrap()) / (2.0 * h);
        assert_relative_eq!(
            k3.derivative(&x3, &MultiIndex::unit(3, 2)).unwrap(),
            fd,
            max_relative = 1e-7
        );
    }

    #[test]
    fn closed_form_gradients_match_jets() {
        for (k, x) in [
            (ReferenceKernel::Laplace2d, vec![0.3, -1.1]),
            (ReferenceKernel::Biharmonic2d, vec![0.3, -1.1]),
            (ReferenceKernel::Laplace3d, vec![0.3, -1.1, 0.7]),
        ] {
            let jet = k.jet(&x, 1).unwrap();
            for axis in 0..x.len() {
                let e = MultiIndex::unit(x.len(), axis);
                assert_relative_eq!(
                    k.derivative(&x, &e).unwrap(),
                    jet.derivative(&e),
                    max_relative = 1e-14
                );
            }
        }
    }

    #[test]
    fn kernels_solve_their_operators_pointwise() {
        let kernels = [
            ReferenceKernel::Laplace2d,
            ReferenceKernel::Laplace3d,
            ReferenceKernel::Biharmonic2d,
            ReferenceKernel::yukawa2d(1.0).unwrap(),
            ReferenceKernel::yukawa3d(2.0).unwrap(),
            ReferenceKernel::anisotropic2d(4.0, 0.5, 1.0).unwrap(),
        ];
        for k in &kernels {
            let a = k.operator();
            let x: Vec<f64> = [0.6, -0.3, 0.45][..a.dim()].to_vec();
            let jet = k.jet(&x, a.order()).unwrap();
            let lk: f64 = a
                .coefficients()
                .iter()
                .map(|(alpha, c)| c * jet.derivative(alpha))
                .sum();
            assert!(lk.abs() < 1e-10, "{k}: {lk}");
        }
    }
}
