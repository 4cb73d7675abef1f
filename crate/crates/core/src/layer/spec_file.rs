//! Boundary specification files (TOML).
//!
//! ```toml
//! shape = "ellipse"      # circle | ellipse | star | ellipsoid
//! a = 2.0
//! b = 1.0
//! nodes = 256            # node count (curves) or sphere-rule order (ellipsoid)
//! center = [0.0, 0.0]    # optional
//! density = "1 + x1"     # or: samples = [ ... ] with one value per node
//! ```
//!
//! Shape parameters: `circle` takes `radius` (default 1); `ellipse` takes `a`, `b`; `star`
//! takes `epsilon`, `lobes` and optional `radius` (default 1); `ellipsoid` takes `a`, `b`, `c`.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

use super::boundary::{ParamBoundary, Shape};
use super::density::DensitySamples;
use super::expr::Expr;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub shape: String,
    pub nodes: usize,
    pub radius: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub epsilon: Option<f64>,
    pub lobes: Option<u32>,
    pub center: Option<Vec<f64>>,
    pub density: Option<String>,
    pub samples: Option<Vec<f64>>,
}

impl BoundarySpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: BoundarySpec =
            toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
        if spec.density.is_some() && spec.samples.is_some() {
            return Err(Error::invalid(
                "density",
                "give either `density` or `samples`, not both",
            ));
        }
        Ok(spec)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn shape(&self) -> Result<Shape> {
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| Error::invalid(name, format!("required for shape `{}`", self.shape)))
        };
        let allow = |names: &[&str]| -> Result<()> {
            let given = [
                ("radius", self.radius.is_some()),
                ("a", self.a.is_some()),
                ("b", self.b.is_some()),
                ("c", self.c.is_some()),
                ("epsilon", self.epsilon.is_some()),
                ("lobes", self.lobes.is_some()),
            ];
            for (name, present) in given {
                if present && !names.contains(&name) {
                    return Err(Error::invalid(
                        name,
                        format!("not a parameter of shape `{}`", self.shape),
                    ));
                }
            }
            Ok(())
        };
        match self.shape.as_str() {
            "circle" => {
                allow(&["radius"])?;
                Ok(Shape::Circle {
                    radius: self.radius.unwrap_or(1.0),
                })
            }
            "ellipse" => {
                allow(&["a", "b"])?;
                Ok(Shape::Ellipse {
                    a: need("a", self.a)?,
                    b: need("b", self.b)?,
                })
            }
            "star" => {
                allow(&["radius", "epsilon", "lobes"])?;
                Ok(Shape::Star {
                    radius: self.radius.unwrap_or(1.0),
                    epsilon: need("epsilon", self.epsilon)?,
                    lobes: self
                        .lobes
                        .ok_or_else(|| Error::invalid("lobes", "required for shape `star`"))?,
                })
            }
            "ellipsoid" => {
                allow(&["a", "b", "c"])?;
                Ok(Shape::Ellipsoid {
                    a: need("a", self.a)?,
                    b: need("b", self.b)?,
                    c: need("c", self.c)?,
                })
            }
            other => Err(Error::invalid("shape", format!("unknown shape `{other}`"))),
        }
    }

    pub fn boundary(&self) -> Result<ParamBoundary> {
        let shape = self.shape()?;
        let center = self
            .center
            .clone()
            .unwrap_or_else(|| vec![0.0; shape.dim()]);
        ParamBoundary::new(shape, center, self.nodes)
    }

    /// The density on `boundary`; `override_expr` replaces whatever the file specifies.
    pub fn density(
        &self,
        boundary: &ParamBoundary,
        override_expr: Option<&str>,
    ) -> Result<DensitySamples> {
        if let Some(text) = override_expr.or(self.density.as_deref()) {
            return DensitySamples::from_expr(boundary, &Expr::parse(text)?);
        }
        match &self.samples {
            Some(values) => DensitySamples::new(boundary, values.clone()),
            None => Err(Error::invalid(
                "density",
                "no density expression or samples given",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_file() {
        let spec = BoundarySpec::parse(
            "shape = \"ellipse\"\na = 2.0\nb = 1.0\nnodes = 64\ndensity = \"1 + x1\"\n",
        )
        .unwrap();
        let b = spec.boundary().unwrap();
        assert_eq!(b.len(), 64);
        assert_eq!(spec.density(&b, None).unwrap().values()[0], 3.0);
        assert_eq!(spec.density(&b, Some("2")).unwrap().values()[5], 2.0);
    }

    #[test]
    fn samples_and_defaults() {
        let spec =
            BoundarySpec::parse("shape = \"circle\"\nnodes = 8\nsamples = [1,2,3,4,5,6,7,8]\n")
                .unwrap();
        let b = spec.boundary().unwrap();
        assert_eq!(spec.density(&b, None).unwrap().values()[7], 8.0);
        let star = BoundarySpec::parse("shape = \"star\"\nepsilon = 0.2\nlobes = 5\nnodes = 32\n")
            .unwrap();
        assert!(matches!(
            star.shape().unwrap(),
            Shape::Star { lobes: 5, .. }
        ));
    }

    #[test]
    fn errors_name_the_field() {
        let field = |text: &str| match BoundarySpec::parse(text).and_then(|s| s.boundary()) {
            Err(Error::InvalidInput { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(field("shape = \"ellipse\"\na = 1.0\nnodes = 16\n"), "b");
        assert_eq!(field("shape = \"blob\"\nnodes = 16\n"), "shape");
        assert_eq!(field("shape = \"circle\"\na = 1.0\nnodes = 16\n"), "a");
        assert_eq!(field("shape = \"circle\"\nnodes = 2\n"), "nodes");
        assert!(matches!(
            BoundarySpec::parse("shape = \"circle\"\nnodes = 16\ncolour = 1\n"),
            Err(Error::Parse(_))
        ));
    }
}
