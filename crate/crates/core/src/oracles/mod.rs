//! Independent ground truth: closed-form kernels, modified Bessel functions, the bump test
//! function, the distributional identity `<K, L^t phi> = phi(0)`, finite-difference residual
//! scans and the log-coefficient fit.

mod bessel;
mod checks;
mod reference;
mod test_function;

pub use bessel::{bessel_i0, bessel_i1, bessel_k0, bessel_k0_derivatives, bessel_k1};
pub use checks::{
    annulus_points, distributional_delta_test, log_fit, residual_at_points, residual_scan, LogFit,
    MIN_DELTA_GRID,
};
pub use reference::{closed_form_reference, ReferenceKernel};
pub use test_function::TestFunction;
