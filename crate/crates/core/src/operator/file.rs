//! Operator specification files.
//!
//! The format is TOML with three keys:
//!
//! ```toml
//! n = 2          # spatial dimension
//! k = 1          # half-order; the operator has order 2k
//!
//! [coefficients] # multi-index (comma-separated exponents) = real value
//! "2,0" = 1.0
//! "0,2" = 1.0
//! "0,0" = -1.0
//! ```
//!
//! Multi-indices must have `n` entries and order at most `2k`; duplicates and unknown keys are
//! rejected, and at least one coefficient of order exactly `2k` must be nonzero.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;

use super::Operator;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorFile {
    n: usize,
    k: u32,
    coefficients: BTreeMap<String, f64>,
}

/// Parses the text of an operator file.
pub fn parse_operator(text: &str) -> Result<Operator<f64>> {
    let file: OperatorFile =
        toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
    let mut coeffs = Vec::with_capacity(file.coefficients.len());
    for (key, value) in file.coefficients {
        let alpha: MultiIndex = key.parse().map_err(|_| {
            Error::invalid(
                "coefficients",
                format!("`{key}` is not a comma-separated multi-index"),
            )
        })?;
        coeffs.push((alpha, value));
    }
    // Distinct strings such as "2,0" and "2, 0" can name the same index.
    let mut seen = std::collections::BTreeSet::new();
    for (alpha, _) in &coeffs {
        if !seen.insert(alpha.clone()) {
            return Err(Error::invalid(
                "coefficients",
                format!("duplicate multi-index ({alpha})"),
            ));
        }
    }
    Operator::new(file.n, file.k, coeffs)
}

/// Reads and parses an operator file.
pub fn read_operator(path: impl AsRef<Path>) -> Result<Operator<f64>> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_operator(&text)
}

/// Canonical text form, accepted by [`parse_operator`].
pub fn write_operator(a: &Operator<f64>) -> String {
    let file = OperatorFile {
        n: a.dim(),
        k: a.k(),
        coefficients: a
            .coefficients()
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect(),
    };
    toml::to_string(&file).expect("operator serializes")
}
