use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{PlaneWave, PlaneWaveSolver};
use crate::operator::Operator;
use crate::scalar::{factorial, harmonic_number};
use crate::sphere::{
    build_quadrature, forward_transform, funk_hecke_multipliers, iterated_laplacian, Expansion,
    Term, TermSum, ZonalKernel,
};

use super::monomial::harmonic_to_monomials;
use super::{plane_wave_constant, FundamentalSolutionTable, TailModel, VALIDITY_TOLERANCE};

/// Parameters of [`build_table_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    /// Initial series order `J`.
    pub jmax: usize,
    /// Raise `J` (up to `jmax_cap`) until the validity radius reaches `target_radius`.
    pub adaptive: bool,
    pub jmax_cap: usize,
    pub target_radius: f64,
    /// Fixed harmonic degree; `None` chooses it adaptively.
    pub degree: Option<usize>,
    /// Upper limit for the adaptive degree; `None` uses 128 for `n = 2` and 40 for `n = 3`.
    pub degree_cap: Option<usize>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            jmax: 40,
            adaptive: true,
            jmax_cap: 120,
            target_radius: 2.0,
            degree: None,
            degree_cap: None,
        }
    }
}

/// Relative size of the two top degrees below which the harmonic degree is accepted.
const DEGREE_TOLERANCE: f64 = 1e-10;
/// Wrong-parity mass (relative) tolerated before assembly fails.
const PARITY_FAILURE: f64 = 1e-8;

/// Series of the fundamental solution with `J = jmax` (raised adaptively, see [`BuildOptions`]).
pub fn build_table(a: &Operator<f64>, jmax: usize) -> Result<FundamentalSolutionTable> {
    build_table_with(
        a,
        &BuildOptions {
            jmax,
            ..BuildOptions::default()
        },
    )
}

pub fn build_table_with(
    a: &Operator<f64>,
    opts: &BuildOptions,
) -> Result<FundamentalSolutionTable> {
    let n = a.dim();
    crate::sphere::check_dim(n)?;
    let solver = PlaneWaveSolver::new(a)?;
    let k = a.k();
    let cap = opts.degree_cap.unwrap_or(if n == 2 { 128 } else { 40 });
    let mut degree = opts
        .degree
        .unwrap_or(if n == 2 { 24 } else { 16 })
        .min(cap.max(1));
    let mut tail = TailModel {
        n,
        k,
        class_index: solver.class_index(),
        degree,
        exact: a.is_homogeneous(),
    };

    let mut jmax = opts.jmax;
    if opts.adaptive && !tail.exact {
        while jmax < opts.jmax_cap
            && tail.valid_radius(jmax, VALIDITY_TOLERANCE) < opts.target_radius
        {
            jmax = (jmax + 4).min(opts.jmax_cap);
        }
    }

    let (f, g) = loop {
        let (f, g) = assemble(&solver, jmax, degree)?;
        if opts.degree.is_some() || degree >= cap || resolved(&f, degree) && resolved(&g, degree) {
            break (f, g);
        }
        degree = (degree + degree / 2).min(cap);
    };
    tail.degree = degree;

    let mut parity_defect = 0.0f64;
    let mut check = |e: &Expansion<f64>, j: usize, what: &str| -> Result<Expansion<f64>> {
        let scale = e.norm().max(1.0);
        let defect = e.wrong_parity_mass(j % 2) / scale;
        if defect > PARITY_FAILURE {
            return Err(Error::InvariantViolated(format!(
                "{what}_{j} has wrong-parity mass {defect:e}"
            )));
        }
        parity_defect = parity_defect.max(defect);
        Ok(e.map_degrees(|l| if l % 2 == j % 2 { 1.0 } else { 0.0 }))
    };
    let f: Vec<Expansion<f64>> = f
        .iter()
        .enumerate()
        .map(|(j, e)| check(e, j, "f").map(|e| compact(&e)))
        .collect::<Result<_>>()?;
    let lead = (2 * k as usize).saturating_sub(n);
    let mut g_out = Vec::with_capacity(g.len());
    for (j, e) in g.iter().enumerate() {
        let e = check(e, j, "g")?;
        // log|x| |x|^d g(theta) must be a polynomial: no degrees above d.
        let d = lead + j;
        let excess = (d + 1..=e.degree_max())
            .map(|l| e.degree_mass(l).powi(2))
            .sum::<f64>()
            .sqrt();
        if excess > PARITY_FAILURE * e.norm().max(1.0) {
            return Err(Error::InvariantViolated(format!(
                "logarithmic term {j} carries degree above {d} (mass {excess:e})"
            )));
        }
        g_out.push(compact(&e.map_degrees(|l| if l <= d { 1.0 } else { 0.0 })));
    }

    let mut b = BTreeMap::new();
    for (j, e) in g_out.iter().enumerate() {
        for (alpha, c) in harmonic_to_monomials(e, lead + j)? {
            if c != 0.0 {
                *b.entry(alpha).or_insert(0.0) += c;
            }
        }
    }
    if b.keys()
        .any(|alpha| (alpha.order() as i64) < 2 * k as i64 - n as i64)
    {
        return Err(Error::InvariantViolated(
            "b_alpha present below order 2k - n".into(),
        ));
    }

    let r_valid = tail.valid_radius(jmax, VALIDITY_TOLERANCE);
    Ok(FundamentalSolutionTable::from_parts(
        a.clone(),
        jmax,
        degree,
        f,
        g_out,
        b,
        tail,
        r_valid,
        true,
        parity_defect,
    ))
}

/// Drops coefficients at roundoff level relative to the expansion and trims trailing degrees.
fn compact(e: &Expansion<f64>) -> Expansion<f64> {
    let chopped = e.chop(1e-15 * e.max_abs_coefficient());
    chopped.resized(chopped.effective_degree())
}

/// Top two degrees carry a negligible share of every expansion.
fn resolved(list: &[Expansion<f64>], degree: usize) -> bool {
    let overall = list.iter().map(|e| e.norm()).fold(0.0, f64::max);
    list.iter().all(|e| {
        let top = (degree.saturating_sub(1)..=degree)
            .map(|l| e.degree_mass(l).powi(2))
            .sum::<f64>()
            .sqrt();
        top <= DEGREE_TOLERANCE * e.norm() + 1e-13 * overall
    })
}

type AngularPair = (Vec<Expansion<f64>>, Vec<Expansion<f64>>);

/// Angular functions `f_j` and `g_j`, `j = 0..=jmax`, at harmonic degree `degree`.
fn assemble(solver: &PlaneWaveSolver<f64>, jmax: usize, degree: usize) -> Result<AngularPair> {
    let a = solver.operator();
    let (n, two_k) = (a.dim(), 2 * a.k() as usize);
    let rule = build_quadrature::<f64>(n, 2 * degree + 8)?;
    let nodes: Vec<Vec<f64>> = rule.nodes().map(|x| x.to_vec()).collect();
    let waves: Vec<PlaneWave<f64>> = nodes
        .par_iter()
        .map(|xi| solver.series(xi, two_k + jmax))
        .collect::<Result<_>>()?;
    let c = plane_wave_constant(n);

    let parts: Vec<(Expansion<f64>, Option<Expansion<f64>>)> = (0..=jmax)
        .into_par_iter()
        .map(|j| {
            let ja = two_k + j;
            let samples: Vec<f64> = waves.iter().map(|w| w.coeffs[ja]).collect();
            let zero = Expansion::zeros(n, degree);
            if samples.iter().all(|&v| v == 0.0) {
                return Ok((zero.clone(), (n % 2 == 0).then_some(zero)));
            }
            let aj = forward_transform(&rule, &samples, degree)?;
            if n % 2 == 1 {
                let lam = funk_hecke_multipliers::<f64>(
                    n,
                    degree,
                    ZonalKernel::SignedPower(ja as u32 + 1),
                )?;
                let scale = c / factorial::<f64>(ja + 1);
                let flat = aj.map_degrees(|l| scale * lam[l]);
                let sum = TermSum::from_term(Term::new((ja + 1) as f64, false, flat));
                let out = iterated_laplacian(&sum, n.div_ceil(2));
                Ok((pick(&out, false, n, degree), None))
            } else {
                let log_lam =
                    funk_hecke_multipliers::<f64>(n, degree, ZonalKernel::LogPower(ja as u32))?;
                let pow_lam =
                    funk_hecke_multipliers::<f64>(n, degree, ZonalKernel::Power(ja as u32))?;
                let scale = c / factorial::<f64>(ja);
                let a_sharp = aj.map_degrees(|l| scale * log_lam[l]);
                let b_sharp = aj.map_degrees(|l| scale * pow_lam[l]);
                // W_2 contributes -H_j B_j, a homogeneous polynomial of degree j.
                let smooth = a_sharp.add_scaled(&b_sharp, -harmonic_number::<f64>(ja));
                let mut sum = TermSum::new(n);
                sum.push(Term::new(ja as f64, false, smooth));
                sum.push(Term::new(ja as f64, true, b_sharp));
                let out = iterated_laplacian(&sum, n / 2);
                Ok((
                    pick(&out, false, n, degree),
                    Some(pick(&out, true, n, degree)),
                ))
            }
        })
        .collect::<Result<_>>()?;

    let mut f = Vec::with_capacity(parts.len());
    let mut g = Vec::new();
    for (fj, gj) in parts {
        f.push(fj);
        if let Some(gj) = gj {
            g.push(gj);
        }
    }
    Ok((f, g))
}

fn pick(sum: &TermSum<f64>, log: bool, n: usize, degree: usize) -> Expansion<f64> {
    sum.terms()
        .iter()
        .find(|t| t.log == log)
        .map(|t| t.angular.resized(degree))
        .unwrap_or_else(|| Expansion::zeros(n, degree))
}
