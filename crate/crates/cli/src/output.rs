//! CSV and JSON rendering of reports and numeric tables.
//!
//! Reports are `field,value` rows in CSV, or one JSON object. Tables have a header row in
//! CSV, or `{"schema_version", "columns", "rows"}` in JSON. Non-finite numbers are written as
//! `nan`/`inf`; JSON tables use `null` and JSON reports the string form. Floats use the
//! shortest round-trip representation.

use std::path::Path;

use fundsol::{Error, Result};
use serde_json::{json, Map, Value};

use crate::Format;

pub const OUTPUT_SCHEMA_VERSION: u32 = 1;

/// An ordered list of named scalar results.
#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn num(&mut self, key: &str, v: f64) {
        let value =
            serde_json::Number::from_f64(v).map_or_else(|| Value::String(float(v)), Value::Number);
        self.entries.push((key.into(), value));
    }

    pub fn int(&mut self, key: &str, v: u64) {
        self.entries.push((key.into(), json!(v)));
    }

    pub fn flag(&mut self, key: &str, v: bool) {
        self.entries.push((key.into(), json!(v)));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::from("field,value\n");
                for (k, v) in &self.entries {
                    let s = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("{k},{s}\n"));
                }
                out
            }
            Format::Json => {
                let mut map = Map::new();
                map.insert("schema_version".into(), json!(OUTPUT_SCHEMA_VERSION));
                for (k, v) in &self.entries {
                    map.insert(k.clone(), v.clone());
                }
                let mut s =
                    serde_json::to_string_pretty(&Value::Object(map)).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

/// Rows of cells under named columns.
#[derive(Debug)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(v) => float(*v),
                            Cell::Int(v) => v.to_string(),
                            Cell::Text(s) => s.clone(),
                            Cell::Empty => String::new(),
                        })
                        .collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Array(
                            row.iter()
                                .map(|c| match c {
                                    Cell::Num(v) => serde_json::Number::from_f64(*v)
                                        .map_or(Value::Null, Value::Number),
                                    Cell::Int(v) => json!(v),
                                    Cell::Text(s) => json!(s),
                                    Cell::Empty => Value::Null,
                                })
                                .collect(),
                        )
                    })
                    .collect();
                let value = json!({
                    "schema_version": OUTPUT_SCHEMA_VERSION,
                    "columns": self.columns,
                    "rows": rows,
                });
                let mut s = serde_json::to_string(&value).expect("table serializes");
                s.push('\n');
                s
            }
        }
    }
}

pub fn float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:?}")
    }
}

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `value` or `lo:hi:count` per axis, comma-separated.
pub fn parse_grid(spec: &str) -> Result<Vec<Vec<f64>>> {
    let bad = |m: String| Error::InvalidInput {
        field: "grid".into(),
        message: m,
    };
    spec.split(',')
        .map(|axis| {
            let parts: Vec<&str> = axis.trim().split(':').collect();
            let num = |s: &str| -> Result<f64> {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("`{s}` is not a number")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(bad(format!("`{s}` is not finite")))
                }
            };
            match parts.as_slice() {
                [v] => Ok(vec![num(v)?]),
                [lo, hi, count] => {
                    let (lo, hi) = (num(lo)?, num(hi)?);
                    let count: usize = count
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("`{count}` is not a point count")))?;
                    if count < 2 {
                        return Err(bad("a range needs at least 2 points".into()));
                    }
                    Ok((0..count)
                        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                        .collect())
                }
                _ => Err(bad(format!(
                    "`{axis}` is neither `value` nor `lo:hi:count`"
                ))),
            }
        })
        .collect()
}

/// All points of the tensor grid, last axis fastest.
pub fn grid_points(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let axes = parse_grid("0:1:3, 2").unwrap();
        assert_eq!(axes, vec![vec![0.0, 0.5, 1.0], vec![2.0]]);
        assert_eq!(grid_points(&axes).len(), 3);
        assert_eq!(grid_points(&axes)[2], vec![1.0, 2.0]);
        assert!(parse_grid("0:1:1").is_err());
        assert!(parse_grid("a").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn rendering() {
        let mut r = Report::default();
        r.num("value", 0.1);
        r.num("radius", f64::INFINITY);
        r.int("n", 2);
        assert_eq!(
            r.render(Format::Csv),
            "field,value\nvalue,0.1\nradius,inf\nn,2\n"
        );
        let mut t = Table::new(&["x", "s"]);
        t.rows.push(vec![Cell::Num(1.0), Cell::Num(f64::NAN)]);
        assert_eq!(t.render(Format::Csv), "x,s\n1.0,nan\n");
        assert!(t.render(Format::Json).contains("[[1.0,null]]"));
    }
}
