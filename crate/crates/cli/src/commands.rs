//! The subcommands.

use std::f64::consts::PI;
use std::path::Path;
use std::process::ExitCode;

use fundsol::assembly::{build_table_with, read_table, write_table, BuildOptions};
use fundsol::kernel::contour_radius;
use fundsol::layer::{jump_report, BoundarySpec, TraceOptions};
use fundsol::operator::{ellipticity_margin, read_operator, Operator, DEFAULT_MARGIN_SAMPLES};
use fundsol::oracles::{
    annulus_points, distributional_delta_test, log_fit, residual_at_points, TestFunction,
};
use fundsol::{Error, FundamentalSolutionTable, MultiIndex, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::{emit, float, grid_points, parse_grid, Cell, Report, Table};
use crate::{BuildArgs, Command, Format};

/// Relative error accepted by the delta test.
const DELTA_TOLERANCE: f64 = 1e-3;
/// Scaled residual accepted by the finite-difference scan.
const RESIDUAL_TOLERANCE: f64 = 1e-4;
/// Wrong-parity mass accepted in the table.
const PARITY_TOLERANCE: f64 = 1e-10;
/// Log coefficient accepted for odd dimensions.
const LOG_TOLERANCE: f64 = 1e-8;

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Check { operator, format } => check(&operator, format),
        Command::Build {
            operator,
            out,
            build,
            format,
        } => {
            let a = read_operator(&operator)?;
            let table = build_table_with(&a, &options(&build)?)?;
            write_table(&table, &out)?;
            emit(&table_report(&table).render(format), None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            table,
            grid,
            out,
            format,
        } => eval(&table, &grid, out.as_deref(), format),
        Command::Series { table, out, format } => series(&table, out.as_deref(), format),
        Command::Oracle {
            operator,
            build,
            grid,
            seed,
            format,
        } => oracle(&operator, &build, grid, seed, format),
        Command::Jump {
            table,
            boundary,
            density,
            beta,
            out,
            format,
        } => jump(
            &table,
            &boundary,
            density.as_deref(),
            &beta,
            out.as_deref(),
            format,
        ),
    }
}

fn options(args: &BuildArgs) -> Result<BuildOptions> {
    if args.jmax < 2 {
        return Err(Error::InvalidInput {
            field: "jmax".into(),
            message: "must be at least 2".into(),
        });
    }
    let degree = match args.quad_order {
        Some(q) if q < 16 => {
            return Err(Error::InvalidInput {
                field: "quad-order".into(),
                message: "must be at least 16".into(),
            })
        }
        Some(q) => Some((q - 8) / 2),
        None => None,
    };
    Ok(BuildOptions {
        jmax: args.jmax,
        jmax_cap: args.jmax.max(BuildOptions::default().jmax_cap),
        degree,
        degree_cap: degree,
        ..BuildOptions::default()
    })
}

fn check(path: &Path, format: Format) -> Result<ExitCode> {
    let a = read_operator(path)?;
    let margin = ellipticity_margin(&a, DEFAULT_MARGIN_SAMPLES);
    let mut r = Report::default();
    r.int("n", a.dim() as u64);
    r.int("k", a.k() as u64);
    r.num("margin", margin);
    match contour_radius(&a) {
        Ok(rho) => {
            r.int("class_index", a.class_index(margin) as u64);
            r.num("contour_radius", rho);
            r.flag("elliptic", true);
            emit(&r.render(format), None)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ Error::NonElliptic { .. }) => {
            r.flag("elliptic", false);
            emit(&r.render(format), None)?;
            Err(e)
        }
        Err(e) => Err(e),
    }
}

fn table_report(t: &FundamentalSolutionTable) -> Report {
    let mut r = Report::default();
    r.int("n", t.dim() as u64);
    r.int("k", t.k() as u64);
    r.int("jmax", t.jmax() as u64);
    r.int("degree", t.degree() as u64);
    r.int("class_index", t.class_index() as u64);
    r.num("r_valid", t.r_valid());
    r.num("parity_defect", t.parity_defect());
    r
}

fn eval(path: &Path, grid: &str, out: Option<&Path>, format: Format) -> Result<ExitCode> {
    let table = read_table(path)?;
    let axes = parse_grid(grid)?;
    if axes.len() != table.dim() {
        return Err(Error::InvalidInput {
            field: "grid".into(),
            message: format!("{} axes given for a table in R^{}", axes.len(), table.dim()),
        });
    }
    let mut columns: Vec<String> = (1..=table.dim()).map(|i| format!("x{i}")).collect();
    columns.extend(["s".to_string(), "s0".to_string()]);
    let mut t = Table {
        columns,
        rows: Vec::new(),
    };
    for x in grid_points(&axes) {
        let s = table.eval_s(&x).unwrap_or(f64::NAN);
        let s0 = table.eval_s0(&x).unwrap_or(f64::NAN);
        let mut row: Vec<Cell> = x.iter().map(|&v| Cell::Num(v)).collect();
        row.extend([Cell::Num(s), Cell::Num(s0)]);
        t.rows.push(row);
    }
    emit(&t.render(format), out)?;
    Ok(ExitCode::SUCCESS)
}

fn orders(n: usize, l: usize) -> Vec<i64> {
    match (n, l) {
        (2, 0) => vec![0],
        (2, _) => vec![l as i64, -(l as i64)],
        _ => (-(l as i64)..=l as i64).collect(),
    }
}

fn series(path: &Path, out: Option<&Path>, format: Format) -> Result<ExitCode> {
    let table = read_table(path)?;
    let n = table.dim();
    let mut t = Table::new(&["term", "j", "l", "m", "alpha", "value"]);
    for (name, list) in [("f", table.f()), ("g", table.log_harmonics())] {
        for (j, e) in list.iter().enumerate() {
            for l in 0..=e.degree_max() {
                for m in orders(n, l) {
                    let c = e.coefficient(l, m);
                    if c != 0.0 {
                        t.rows.push(vec![
                            Cell::Text(name.into()),
                            Cell::Int(j as i64),
                            Cell::Int(l as i64),
                            Cell::Int(m),
                            Cell::Empty,
                            Cell::Num(c),
                        ]);
                    }
                }
            }
        }
    }
    for (alpha, &c) in table.b() {
        let label: Vec<String> = alpha.entries().iter().map(|e| e.to_string()).collect();
        t.rows.push(vec![
            Cell::Text("b".into()),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Text(label.join(" ")),
            Cell::Num(c),
        ]);
    }
    emit(&t.render(format), out)?;
    Ok(ExitCode::SUCCESS)
}

fn oracle(
    path: &Path,
    build: &BuildArgs,
    grid: usize,
    seed: Option<u64>,
    format: Format,
) -> Result<ExitCode> {
    let a: Operator<f64> = read_operator(path)?;
    let table = build_table_with(&a, &options(build)?)?;
    let mut r = table_report(&table);
    let reach = table.r_valid().min(1.0);
    let phi = TestFunction::centered(a.dim(), reach)?;
    let delta = distributional_delta_test(&table, &a, &phi, grid)?;
    r.num("delta_support", reach);
    r.num("delta_error", delta);
    let annulus = (0.3, (0.9 * table.r_valid()).min(1.5));
    let points = match seed {
        None => annulus_points(a.dim(), annulus, 50),
        Some(s) => random_points(a.dim(), annulus, 50, s),
    };
    let residual = residual_at_points(&table, &a, &points)?;
    r.num("residual_r_min", annulus.0);
    r.num("residual_r_max", annulus.1);
    r.num("residual_max", residual);
    let lead = 2 * a.k() as i32 - a.dim() as i32;
    let fit = log_fit(&table, lead, 0.1 * reach)?;
    r.num("log_fit_c1", fit.c1);
    r.num("log_fit_c2", fit.c2);
    let mut passed = delta < DELTA_TOLERANCE
        && residual < RESIDUAL_TOLERANCE
        && table.parity_defect() < PARITY_TOLERANCE;
    if a.dim() % 2 == 1 {
        passed &= fit.c2.abs() < LOG_TOLERANCE;
    }
    r.flag("passed", passed);
    emit(&r.render(format), None)?;
    Ok(ExitCode::SUCCESS)
}

fn random_points(n: usize, annulus: (f64, f64), count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = annulus.0 * (annulus.1 / annulus.0).powf(rng.gen::<f64>());
            let phi = 2.0 * PI * rng.gen::<f64>();
            if n == 2 {
                vec![r * phi.cos(), r * phi.sin()]
            } else {
                let z: f64 = rng.gen_range(-1.0..1.0);
                let rho = (1.0 - z * z).sqrt();
                vec![r * rho * phi.cos(), r * rho * phi.sin(), r * z]
            }
        })
        .collect()
}

fn jump(
    table_path: &Path,
    boundary_path: &Path,
    density: Option<&str>,
    beta: &str,
    out: Option<&Path>,
    format: Format,
) -> Result<ExitCode> {
    let table = read_table(table_path)?;
    let spec = BoundarySpec::read(boundary_path)?;
    let boundary = spec.boundary()?;
    let mu = spec.density(&boundary, density)?;
    let beta: MultiIndex = beta.parse().map_err(|_| Error::InvalidInput {
        field: "beta".into(),
        message: format!("`{beta}` is not a comma-separated multi-index"),
    })?;
    let report = jump_report(&table, &boundary, &mu, &beta, &TraceOptions::default())?;
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Json => {
            let n = boundary.dim();
            let mut columns: Vec<String> = if n == 2 {
                vec!["t".into()]
            } else {
                (1..=n).map(|i| format!("omega{i}")).collect()
            };
            columns.extend((1..=n).map(|i| format!("x{i}")));
            columns.extend((1..=n).map(|i| format!("nu{i}")));
            columns.extend(["observed", "predicted", "rel_error"].map(String::from));
            let rows = report
                .rows
                .iter()
                .map(|row| {
                    row.param
                        .iter()
                        .chain(&row.point)
                        .chain(&row.normal)
                        .chain([&row.observed, &row.predicted, &row.rel_error])
                        .map(|&v| Cell::Num(v))
                        .collect()
                })
                .collect();
            Table { columns, rows }.render(Format::Json)
        }
    };
    emit(&text, out)?;
    if out.is_some() {
        println!("max_error,{}", float(report.max_error));
        println!("median_error,{}", float(report.median_error));
    }
    Ok(ExitCode::SUCCESS)
}
