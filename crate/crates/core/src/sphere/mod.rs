//! Calculus on the unit sphere: quadrature, real harmonic expansions, Günter tangential
//! derivatives, the rotation family `T_eta(theta)`, zonal (Funk–Hecke) multipliers and the
//! radial-power engine that applies Laplacians to `|x|^m (log|x|)^q f(x/|x|)`.

mod funk_hecke;
mod gunter;
mod harmonics;
mod quadrature;
mod radial;
mod rotation;

pub use funk_hecke::{funk_hecke_multipliers, ZonalKernel};
pub use gunter::{gunter_derivative_field, laplacian_via_gunter};
pub use harmonics::{basis_len, basis_values, forward_transform, synthesize, Expansion};
pub use quadrature::{build_quadrature, Layout, SphereRule};
pub use radial::{iterated_laplacian, radial_laplacian_step, Term, TermSum};
pub use rotation::{rotation_map, ZonalRule};

use crate::error::{Error, Result};

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if matches!(n, 2 | 3) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}
