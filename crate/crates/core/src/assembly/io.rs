use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::operator::Operator;
use crate::sphere::{basis_len, Expansion};

use super::{FundamentalSolutionTable, TailModel};

/// Version written to and required from table files.
pub const TABLE_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    schema_version: u32,
    n: usize,
    k: u32,
    coefficients: BTreeMap<MultiIndex, f64>,
    jmax: usize,
    degree: usize,
    class_index: u32,
    homogeneous: bool,
    /// `null` when the series terminates.
    r_valid: Option<f64>,
    parity_checked: bool,
    parity_defect: f64,
    /// Harmonic coefficients of `f_j`.
    f: Vec<Vec<f64>>,
    /// Harmonic coefficients of the logarithmic terms.
    log: Vec<Vec<f64>>,
    b: BTreeMap<MultiIndex, f64>,
}

/// JSON text of a table. Floats are written in shortest round-trip form, so reading the text
/// back reproduces every coefficient bit for bit.
pub fn table_to_json(t: &FundamentalSolutionTable) -> String {
    let file = TableFile {
        schema_version: TABLE_SCHEMA_VERSION,
        n: t.dim(),
        k: t.k(),
        coefficients: t.a.coefficients().clone(),
        jmax: t.jmax,
        degree: t.degree,
        class_index: t.tail.class_index,
        homogeneous: t.tail.exact,
        r_valid: t.r_valid.is_finite().then_some(t.r_valid),
        parity_checked: t.parity_checked,
        parity_defect: t.parity_defect,
        f: t.f.iter().map(|e| e.coefficients().to_vec()).collect(),
        log: t.g.iter().map(|e| e.coefficients().to_vec()).collect(),
        b: t.b.clone(),
    };
    serde_json::to_string_pretty(&file).expect("table serializes")
}

pub fn table_from_json(text: &str) -> Result<FundamentalSolutionTable> {
    let file: TableFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.schema_version != TABLE_SCHEMA_VERSION {
        return Err(Error::invalid(
            "schema_version",
            format!(
                "expected {TABLE_SCHEMA_VERSION}, found {}",
                file.schema_version
            ),
        ));
    }
    let a = Operator::new(file.n, file.k, file.coefficients)?;
    let expansions = |list: Vec<Vec<f64>>, field: &str| -> Result<Vec<Expansion<f64>>> {
        list.into_iter()
            .map(|c| {
                let degree = (0..=10_000)
                    .find(|&l| basis_len(file.n, l) >= c.len())
                    .filter(|&l| basis_len(file.n, l) == c.len())
                    .ok_or_else(|| {
                        Error::invalid(field, "coefficient count is not a full degree block")
                    })?;
                Expansion::from_coefficients(file.n, degree, c)
            })
            .collect()
    };
    let f = expansions(file.f, "f")?;
    let g = expansions(file.log, "log")?;
    if f.len() != file.jmax + 1 {
        return Err(Error::invalid("f", "expected jmax + 1 angular functions"));
    }
    if !(g.is_empty() || g.len() == f.len())
        || (file.n % 2 == 1 && !(g.is_empty() && file.b.is_empty()))
    {
        return Err(Error::invalid(
            "log",
            "logarithmic terms do not match the dimension",
        ));
    }
    if file.b.keys().any(|alpha| alpha.dim() != file.n) {
        return Err(Error::invalid("b", "multi-index length differs from n"));
    }
    let tail = TailModel {
        n: file.n,
        k: file.k,
        class_index: file.class_index,
        degree: file.degree,
        exact: file.homogeneous,
    };
    Ok(FundamentalSolutionTable::from_parts(
        a,
        file.jmax,
        file.degree,
        f,
        g,
        file.b,
        tail,
        file.r_valid.unwrap_or(f64::INFINITY),
        file.parity_checked,
        file.parity_defect,
    ))
}

pub fn write_table(t: &FundamentalSolutionTable, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, table_to_json(t))?;
    Ok(())
}

pub fn read_table(path: impl AsRef<Path>) -> Result<FundamentalSolutionTable> {
    table_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::build_table;

    #[test]
    fn round_trip_is_bit_exact() {
        let a = Operator::new(
            2,
            1,
            [
                ("2,0", 1.0),
                ("0,2", 1.3),
                ("1,1", 0.2),
                ("1,0", 0.1),
                ("0,0", -0.3),
            ]
            .map(|(s, c)| (s.parse().unwrap(), c)),
        )
        .unwrap();
        let t = build_table(&a, 12).unwrap();
        let back = table_from_json(&table_to_json(&t)).unwrap();
        assert_eq!(t, back);
        for (x, y) in t.f().iter().zip(back.f()) {
            for (p, q) in x.coefficients().iter().zip(y.coefficients()) {
                assert_eq!(p.to_bits(), q.to_bits());
            }
        }
        let x = [0.3, -0.2];
        assert_eq!(
            t.eval_s(&x).unwrap().to_bits(),
            back.eval_s(&x).unwrap().to_bits()
        );
    }

    #[test]
    fn rejects_bad_files() {
        let t = build_table(&Operator::laplacian(3), 4).unwrap();
        let text = table_to_json(&t);
        assert!(
            table_from_json(&text.replace("\"schema_version\": 1", "\"schema_version\": 9"))
                .is_err()
        );
        assert!(table_from_json(&text.replace("\"jmax\"", "\"extra\": 1, \"jmax\"")).is_err());
        assert!(matches!(table_from_json("{"), Err(Error::Parse(_))));
    }
}
