//! Nyström single-layer potentials, one-sided traces and the jump report.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::assembly::FundamentalSolutionTable;
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::operator::Operator;

use super::boundary::ParamBoundary;
use super::density::DensitySamples;
use super::kernel::KernelHandle;

/// `v[mu](x) = sum_i K(x - y_i) mu_i w_i`.
pub fn single_layer<K: KernelHandle + ?Sized>(
    kernel: &K,
    b: &ParamBoundary,
    mu: &DensitySamples,
    x: &[f64],
) -> Result<f64> {
    derivative_potential(kernel, b, mu, x, &MultiIndex::zero(b.dim()))
}

/// `d^beta v[mu](x)` with the differentiated kernel, for `x` off the boundary.
pub fn derivative_potential<K: KernelHandle + ?Sized>(
    kernel: &K,
    b: &ParamBoundary,
    mu: &DensitySamples,
    x: &[f64],
    beta: &MultiIndex,
) -> Result<f64> {
    check_inputs(kernel, b, mu, beta)?;
    if x.len() != b.dim() || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(
            "x",
            format!("expected {} finite coordinates", b.dim()),
        ));
    }
    let distance = b.distance(x);
    if distance <= b.spacing() {
        return Err(Error::TooCloseToBoundary {
            distance,
            spacing: b.spacing(),
        });
    }
    nystrom(kernel, b, mu, x, beta)
}

fn check_inputs<K: KernelHandle + ?Sized>(
    kernel: &K,
    b: &ParamBoundary,
    mu: &DensitySamples,
    beta: &MultiIndex,
) -> Result<()> {
    if kernel.dim() != b.dim() {
        return Err(Error::invalid(
            "kernel",
            "kernel and boundary dimensions differ",
        ));
    }
    if beta.dim() != b.dim() {
        return Err(Error::invalid(
            "beta",
            format!("expected {} entries", b.dim()),
        ));
    }
    if mu.len() != b.len() {
        return Err(Error::invalid(
            "density",
            "sample count differs from node count",
        ));
    }
    Ok(())
}

fn nystrom<K: KernelHandle + ?Sized>(
    kernel: &K,
    b: &ParamBoundary,
    mu: &DensitySamples,
    x: &[f64],
    beta: &MultiIndex,
) -> Result<f64> {
    let terms: Vec<Result<f64>> = (0..b.len())
        .into_par_iter()
        .map(|i| {
            let c = mu.values()[i] * b.weights()[i];
            if c == 0.0 {
                return Ok(0.0);
            }
            let z: Vec<f64> = x.iter().zip(b.point(i)).map(|(a, y)| a - y).collect();
            Ok(c * kernel.derivative(&z, beta)?)
        })
        .collect();
    // Summed in node order so results do not depend on the thread count.
    let mut total = 0.0;
    for t in terms {
        total += t?;
    }
    Ok(total)
}

/// `d^beta v[mu]` at boundary node `node` by the trapezoid sum with that node left out.
///
/// For kernels whose singular part is odd this is a first-order approximation of the
/// principal value; it serves as a cross-check on the mean of the two one-sided traces.
pub fn principal_value<K: KernelHandle + ?Sized>(
    kernel: &K,
    b: &ParamBoundary,
    mu: &DensitySamples,
    node: usize,
    beta: &MultiIndex,
) -> Result<f64> {
    check_inputs(kernel, b, mu, beta)?;
    if node >= b.len() {
        return Err(Error::invalid("node", format!("index {node} out of range")));
    }
    let x0 = b.point(node);
    let mut total = 0.0;
    for i in (0..b.len()).filter(|&i| i != node) {
        let z: Vec<f64> = x0.iter().zip(b.point(i)).map(|(a, y)| a - y).collect();
        total += mu.values()[i] * b.weights()[i] * kernel.derivative(&z, beta)?;
    }
    Ok(total)
}

/// Side of the boundary from which a trace is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Interior,
    Exterior,
}

/// Settings for normal-line extrapolation of one-sided traces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Number of offsets `delta_i = delta_0 / 2^i`.
    pub levels: usize,
    /// `delta_0` in units of the node spacing.
    pub start: f64,
    /// Each offset is evaluated on a boundary refined until the node spacing is at most
    /// `delta / oversampling`.
    pub oversampling: f64,
    /// Relative tolerance on the difference of the last two extrapolants.
    pub tolerance: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            levels: 6,
            start: 5.0,
            oversampling: 4.0,
            tolerance: 1e-6,
        }
    }
}

/// An extrapolated one-sided limit and its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trace {
    pub value: f64,
    pub error: f64,
}

/// The offsets and the refined boundaries on which they are evaluated.
struct Ladder {
    deltas: Vec<f64>,
    /// Index into `grids` for each offset.
    grid_of: Vec<usize>,
    grids: Vec<(ParamBoundary, DensitySamples)>,
}

impl Ladder {
    fn new(b: &ParamBoundary, mu: &DensitySamples, opts: &TraceOptions) -> Result<Self> {
        if opts.levels < 2 {
            return Err(Error::invalid(
                "levels",
                "at least two offsets are required",
            ));
        }
        if !(opts.start > 0.0 && opts.oversampling > 0.0 && opts.tolerance > 0.0) {
            return Err(Error::invalid(
                "trace options",
                "start, oversampling and tolerance must be positive",
            ));
        }
        let delta0 = opts.start * b.spacing();
        let deltas: Vec<f64> = (0..opts.levels)
            .map(|i| delta0 / 2f64.powi(i as i32))
            .collect();
        let mut grids: Vec<(ParamBoundary, DensitySamples)> = Vec::new();
        let mut factors: Vec<usize> = Vec::new();
        let mut grid_of = Vec::new();
        for &d in &deltas {
            let needed = (opts.oversampling * b.max_spacing() / d).ceil().max(1.0) as usize;
            let factor = needed.next_power_of_two();
            let idx = match factors.iter().position(|&f| f == factor) {
                Some(i) => i,
                None => {
                    let fine = b.refined(b.resolution() * factor)?;
                    let mu_fine = mu.resample(b, &fine)?;
                    factors.push(factor);
                    grids.push((fine, mu_fine));
                    grids.len() - 1
                }
            };
            grid_of.push(idx);
        }
        Ok(Ladder {
            deltas,
            grid_of,
            grids,
        })
    }

    fn trace<K: KernelHandle + ?Sized>(
        &self,
        kernel: &K,
        x0: &[f64],
        nu: &[f64],
        side: Side,
        beta: &MultiIndex,
        tolerance: f64,
    ) -> Result<Trace> {
        let sign = match side {
            Side::Interior => -1.0,
            Side::Exterior => 1.0,
        };
        let mut samples = Vec::with_capacity(self.deltas.len());
        for (&d, &g) in self.deltas.iter().zip(&self.grid_of) {
            let (fine, mu) = &self.grids[g];
            let x: Vec<f64> = x0.iter().zip(nu).map(|(p, n)| p + sign * d * n).collect();
            samples.push(nystrom(kernel, fine, mu, &x, beta)?);
        }
        let (value, error) = extrapolate_to_zero(&self.deltas, &samples);
        let allowed = 10.0 * tolerance * value.abs().max(1.0);
        if !(error <= allowed) {
            return Err(Error::NoConvergence {
                difference: error,
                tolerance: allowed,
            });
        }
        Ok(Trace { value, error })
    }
}

/// Neville extrapolation of `(h_i, f_i)` to `h = 0`: the full extrapolant and its distance to
/// the one built without the coarsest sample.
pub fn extrapolate_to_zero(h: &[f64], f: &[f64]) -> (f64, f64) {
    let m = h.len();
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![f[i]];
        for j in 1..=i {
            let (hi, hl) = (h[i], h[i - j]);
            let v = (hl * row[j - 1] - hi * table[i - 1][j - 1]) / (hl - hi);
            row.push(v);
        }
        table.push(row);
    }
    let last = &table[m - 1];
    let value = last[m - 1];
    (value, (value - last[m - 2]).abs())
}

/// One-sided limit of `d^beta v[mu]` at node `node` along the normal line.
pub fn trace_extrapolate<K: KernelHandle + ?Sized>(
    kernel: &K,
    b: &ParamBoundary,
    mu: &DensitySamples,
    node: usize,
    side: Side,
    beta: &MultiIndex,
    opts: &TraceOptions,
) -> Result<Trace> {
    check_inputs(kernel, b, mu, beta)?;
    if node >= b.len() {
        return Err(Error::invalid("node", format!("index {node} out of range")));
    }
    let ladder = Ladder::new(b, mu, opts)?;
    ladder.trace(
        kernel,
        b.point(node),
        b.normal(node),
        side,
        beta,
        opts.tolerance,
    )
}

/// Interior and exterior traces of `d^beta v[mu]` at every node, sharing one set of refined
/// boundaries.
pub fn trace_pairs<K: KernelHandle + ?Sized>(
    kernel: &K,
    b: &ParamBoundary,
    mu: &DensitySamples,
    beta: &MultiIndex,
    opts: &TraceOptions,
) -> Result<Vec<(Trace, Trace)>> {
    check_inputs(kernel, b, mu, beta)?;
    let ladder = Ladder::new(b, mu, opts)?;
    let pairs: Vec<Result<(Trace, Trace)>> = (0..b.len())
        .into_par_iter()
        .map(|i| {
            let (x0, nu) = (b.point(i), b.normal(i));
            let inner = ladder.trace(kernel, x0, nu, Side::Interior, beta, opts.tolerance)?;
            let outer = ladder.trace(kernel, x0, nu, Side::Exterior, beta, opts.tolerance)?;
            Ok((inner, outer))
        })
        .collect();
    pairs.into_iter().collect()
}

/// Observed and predicted jump at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpRow {
    pub param: Vec<f64>,
    pub point: Vec<f64>,
    pub normal: Vec<f64>,
    pub interior: Trace,
    pub exterior: Trace,
    /// Interior minus exterior limit.
    pub observed: f64,
    /// `-nu^beta mu / P_0(nu)`.
    pub predicted: f64,
    pub rel_error: f64,
}

/// Per-node comparison of the observed jump of `d^beta v[mu]` with the predicted one.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpReport {
    pub beta: MultiIndex,
    pub rows: Vec<JumpRow>,
    pub max_error: f64,
    pub median_error: f64,
}

impl JumpReport {
    /// CSV with columns `t, x1..xn, nu1..nun, observed, predicted, rel_error` (the ellipsoid
    /// writes its chart point `omega1..omega3` in place of `t`).
    pub fn to_csv(&self) -> String {
        let n = self.rows.first().map_or(2, |r| r.point.len());
        let mut header: Vec<String> = if n == 2 {
            vec!["t".into()]
        } else {
            (1..=n).map(|i| format!("omega{i}")).collect()
        };
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.extend((1..=n).map(|i| format!("nu{i}")));
        header.extend(["observed", "predicted", "rel_error"].map(String::from));
        let mut out = header.join(",");
        out.push('\n');
        for r in &self.rows {
            let fields: Vec<String> = r
                .param
                .iter()
                .chain(&r.point)
                .chain(&r.normal)
                .chain([&r.observed, &r.predicted, &r.rel_error])
                .map(|v| format!("{v:e}"))
                .collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }
}

/// Jump report for a table-backed kernel.
pub fn jump_report(
    table: &FundamentalSolutionTable,
    b: &ParamBoundary,
    mu: &DensitySamples,
    beta: &MultiIndex,
    opts: &TraceOptions,
) -> Result<JumpReport> {
    jump_report_with(table, table.operator(), b, mu, beta, opts)
}

/// Jump report for any kernel that is a fundamental solution of `a`.
pub fn jump_report_with<K: KernelHandle + ?Sized>(
    kernel: &K,
    a: &Operator<f64>,
    b: &ParamBoundary,
    mu: &DensitySamples,
    beta: &MultiIndex,
    opts: &TraceOptions,
) -> Result<JumpReport> {
    if a.dim() != b.dim() {
        return Err(Error::invalid(
            "operator",
            "operator and boundary dimensions differ",
        ));
    }
    if beta.order() + 1 != 2 * a.k() {
        return Err(Error::invalid(
            "beta",
            "the jump relation needs |beta| = 2k - 1",
        ));
    }
    let pairs = trace_pairs(kernel, b, mu, beta, opts)?;
    let predicted: Vec<f64> = (0..b.len())
        .map(|i| {
            let nu = b.normal(i);
            -beta.monomial(nu) * mu.values()[i] / a.principal_symbol(nu)
        })
        .collect();
    let scale = 0.1 * predicted.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let rows: Vec<JumpRow> = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (interior, exterior))| {
            let observed = interior.value - exterior.value;
            let denom = predicted[i].abs().max(scale);
            let diff = (observed - predicted[i]).abs();
            JumpRow {
                param: b.param(i).to_vec(),
                point: b.point(i).to_vec(),
                normal: b.normal(i).to_vec(),
                interior,
                exterior,
                observed,
                predicted: predicted[i],
                rel_error: if denom > 0.0 { diff / denom } else { diff },
            }
        })
        .collect();
    let mut errors: Vec<f64> = rows.iter().map(|r| r.rel_error).collect();
    errors.sort_by(f64::total_cmp);
    let max_error = errors.last().copied().unwrap_or(0.0);
    let median_error = match errors.len() {
        0 => 0.0,
        m if m % 2 == 1 => errors[m / 2],
        m => 0.5 * (errors[m / 2 - 1] + errors[m / 2]),
    };
    Ok(JumpReport {
        beta: beta.clone(),
        rows,
        max_error,
        median_error,
    })
}
