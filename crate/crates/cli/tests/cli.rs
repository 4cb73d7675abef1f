use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const LAPLACE_2D: &str = "n = 2\nk = 1\n[coefficients]\n\"2,0\" = 1.0\n\"0,2\" = 1.0\n";
const LAPLACE_3D: &str =
    "n = 3\nk = 1\n[coefficients]\n\"2,0,0\" = 1.0\n\"0,2,0\" = 1.0\n\"0,0,2\" = 1.0\n";
const WAVE_2D: &str = "n = 2\nk = 1\n[coefficients]\n\"2,0\" = 1.0\n\"0,2\" = -1.0\n";
const ELLIPSE: &str = "shape = \"ellipse\"\na = 2.0\nb = 1.0\nnodes = 128\ndensity = \"1 + x1\"\n";

fn fundsol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fundsol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(csv: &str, key: &str) -> String {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{csv}"))
        .to_string()
}

fn built(dir: &TempDir, operator: &str, name: &str) -> PathBuf {
    let op = write(dir, &format!("{name}.toml"), operator);
    let table = dir.path().join(format!("{name}.json"));
    let o = fundsol(&["build", "--operator", s(&op), "--out", s(&table)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    table
}

#[test]
fn check_reports_laplacian_margin() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "lap.toml", LAPLACE_2D);
    let o = fundsol(&["check", "--operator", s(&op)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let margin: f64 = field(&out, "margin").parse().unwrap();
    assert!((margin - 1.0).abs() < 1e-12);
    assert_eq!(field(&out, "elliptic"), "true");
}

#[test]
fn check_json_has_schema_version() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "lap.toml", LAPLACE_3D);
    let o = fundsol(&["check", "--operator", s(&op), "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["n"], 3);
}

#[test]
fn non_elliptic_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "wave.toml", WAVE_2D);
    let o = fundsol(&["check", "--operator", s(&op)]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "NonElliptic");
}

#[test]
fn invalid_input_exits_with_three_and_names_the_field() {
    let dir = TempDir::new().unwrap();
    let op = write(
        &dir,
        "bad.toml",
        "n = 2\nk = 1\n[coefficients]\n\"2,0,1\" = 1.0\n",
    );
    let o = fundsol(&["check", "--operator", s(&op)]);
    assert_eq!(o.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "InvalidInput");
    assert_eq!(err["field"], "coefficients");

    let table = built(&dir, LAPLACE_2D, "lap");
    let o = fundsol(&["eval", "--table", s(&table), "--grid", "1:2"]);
    assert_eq!(o.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["field"], "grid");

    let o = fundsol(&["check", "--operator"]);
    assert_eq!(o.status.code(), Some(3));
    let o = fundsol(&["check", "--operator", s(&dir.path().join("missing.toml"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eval_matches_newtonian_potential() {
    let dir = TempDir::new().unwrap();
    let table = built(&dir, LAPLACE_3D, "lap3");
    let o = fundsol(&["eval", "--table", s(&table), "--grid", "1,0,0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x1,x2,x3,s,s0"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert!((row[3] + 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-12);
}

#[test]
fn eval_grid_counts_rows_and_writes_json() {
    let dir = TempDir::new().unwrap();
    let table = built(&dir, LAPLACE_2D, "lap");
    let out = dir.path().join("grid.json");
    let o = fundsol(&[
        "eval",
        "--table",
        s(&table),
        "--grid",
        "0.5:1.5:3,-1:1:5",
        "--format",
        "json",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 15);
    assert_eq!(v["columns"][2], "s");
}

#[test]
fn series_lists_log_coefficient() {
    let dir = TempDir::new().unwrap();
    let table = built(&dir, LAPLACE_2D, "lap");
    let o = fundsol(&["series", "--table", s(&table)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("term,j,l,m,alpha,value\n"));
    let b: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("b,,,,0 0,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((b - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);
}

#[test]
fn jump_on_ellipse_predicts_minus_three_at_the_tip() {
    let dir = TempDir::new().unwrap();
    let table = built(&dir, LAPLACE_2D, "lap");
    let boundary = write(&dir, "ellipse.toml", ELLIPSE);
    let csv = dir.path().join("jump.csv");
    let o = fundsol(&[
        "jump",
        "--table",
        s(&table),
        "--boundary",
        s(&boundary),
        "--beta",
        "1,0",
        "--out",
        s(&csv),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let max: f64 = field(&stdout(&o), "max_error").parse().unwrap();
    assert!(max < 1e-2);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("t,x1,x2,nu1,nu2,observed,predicted,rel_error")
    );
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(first[0], 0.0);
    assert_eq!(first[6], -3.0);
    assert!((first[5] + 3.0).abs() < 1e-4);
    assert_eq!(text.lines().count(), 129);
}

#[test]
fn jump_rejects_wrong_beta_order() {
    let dir = TempDir::new().unwrap();
    let table = built(&dir, LAPLACE_2D, "lap");
    let boundary = write(&dir, "ellipse.toml", ELLIPSE);
    let o = fundsol(&[
        "jump",
        "--table",
        s(&table),
        "--boundary",
        s(&boundary),
        "--beta",
        "0,0",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oracle_passes_on_polyharmonic_operators() {
    let dir = TempDir::new().unwrap();
    let op = write(
        &dir,
        "bih.toml",
        "n = 2\nk = 2\n[coefficients]\n\"4,0\" = 1.0\n\"2,2\" = 2.0\n\"0,4\" = 1.0\n",
    );
    let o = fundsol(&["oracle", "--operator", s(&op)]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "passed"), "true");

    let dir = TempDir::new().unwrap();
    let op = write(&dir, "lap.toml", LAPLACE_3D);
    let o = fundsol(&[
        "oracle",
        "--operator",
        s(&op),
        "--seed",
        "11",
        "--grid",
        "64",
    ]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "passed"), "true");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let op = write(
        &dir,
        "helm.toml",
        "n = 2\nk = 1\n[coefficients]\n\"2,0\" = 1.0\n\"0,2\" = 1.0\n\"0,0\" = -1.0\n",
    );
    let (t1, t2) = (dir.path().join("t1.json"), dir.path().join("t2.json"));
    for t in [&t1, &t2] {
        assert!(fundsol(&["build", "--operator", s(&op), "--out", s(t)])
            .status
            .success());
    }
    assert_eq!(fs::read(&t1).unwrap(), fs::read(&t2).unwrap());
    let e1 = fundsol(&["eval", "--table", s(&t1), "--grid", "0.1:2:7,0.3"]);
    let e2 = fundsol(&["eval", "--table", s(&t2), "--grid", "0.1:2:7,0.3"]);
    assert_eq!(e1.stdout, e2.stdout);
    let o1 = fundsol(&["oracle", "--operator", s(&op), "--seed", "3"]);
    let o2 = fundsol(&["oracle", "--operator", s(&op), "--seed", "3"]);
    assert_eq!(o1.stdout, o2.stdout);
}
