//! Single-layer potentials `v[mu](x) = int S(x - y) mu(y) dsigma_y` on closed boundaries,
//! their derivatives off the boundary, one-sided traces by extrapolation along the normal,
//! and the per-node check of the jump `v_beta^+ - v_beta^- = -nu^beta mu / P_0(nu)` for
//! `|beta| = 2k - 1`.

mod boundary;
mod density;
mod expr;
mod kernel;
mod potential;
mod spec_file;

pub use boundary::{ParamBoundary, Regularity, Shape};
pub use density::DensitySamples;
pub use expr::Expr;
pub use kernel::{KernelHandle, ScaledKernel};
pub use potential::{
    derivative_potential, extrapolate_to_zero, jump_report, jump_report_with, principal_value,
    single_layer, trace_extrapolate, trace_pairs, JumpReport, JumpRow, Side, Trace, TraceOptions,
};
pub use spec_file::BoundarySpec;
