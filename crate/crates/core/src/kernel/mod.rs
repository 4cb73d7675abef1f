//! Plane-wave kernel: the contour integral
//! `v(x, xi, t) = (1/2 pi i) oint e^{(x.xi - t) z} / (z P(z xi)) dz`, its Taylor coefficients
//! `a_j(xi) = (1/2 pi i) oint z^{j-1} / P(z xi) dz` and the factored form
//! `v = s^{2k} w(s)`, `s = x.xi - t`.

mod contour;

pub use contour::{
    class_truncation_bound, contour_coefficients, contour_radius, series_coefficients,
    truncation_bound, v_eval, w_eval, ContourSpec, PlaneWave, PlaneWaveSolver, RawContour,
};
