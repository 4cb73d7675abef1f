//! Fundamental solutions of elliptic constant-coefficient operators.
//!
//! For an operator `L = sum_{|alpha| <= 2k} a_alpha d^alpha` on `R^n` the crate builds the
//! series
//!
//! ```text
//! S(x) = sum_j |x|^{2k-n+j} f_j(x/|x|) + log|x| sum_alpha b_alpha x^alpha
//! ```
//!
//! from plane-wave contour integrals, spherical-harmonic transforms and iterated Laplacians,
//! evaluates it with derivatives, forms single-layer potentials and checks the results against
//! independent oracles.

pub mod assembly;
pub mod error;
pub mod jet;
pub mod kernel;
pub mod layer;
pub mod multi_index;
pub mod operator;
pub mod oracles;
pub mod quadrature;
pub mod scalar;
pub mod sphere;

pub use assembly::FundamentalSolutionTable;
pub use error::{Error, Result};
pub use layer::{DensitySamples, KernelHandle, ParamBoundary};
pub use multi_index::MultiIndex;
pub use oracles::{ReferenceKernel, TestFunction};
pub use scalar::Scalar;

/// Double-precision operator coefficients.
pub type OperatorCoefficients = operator::Operator<f64>;
/// Double-precision plane-wave coefficients `a_j(xi)`.
pub type PlaneWaveCoefficients = kernel::PlaneWave<f64>;
/// Double-precision real spherical-harmonic expansion.
pub type HarmonicExpansion = sphere::Expansion<f64>;
/// Double-precision sphere quadrature.
pub type SphereQuadrature = sphere::SphereRule<f64>;
/// Double-precision radial term `|x|^m (log|x|)^q f(x/|x|)`.
pub type RadialTerm = sphere::Term<f64>;
