//! Multi-indices `alpha = (alpha_1, ..., alpha_n)` and the monomials they label.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::scalar::Scalar;

/// A tuple of non-negative exponents. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index `e_axis` in `n` variables.
    pub fn unit(n: usize, axis: usize) -> Self {
        let mut e = vec![0; n];
        e[axis] = 1;
        MultiIndex(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|alpha|`, the sum of the entries.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `alpha!` as a float.
    pub fn factorial<T: Scalar>(&self) -> T {
        self.0.iter().fold(T::one(), |acc, &a| {
            acc * crate::scalar::factorial::<T>(a as usize)
        })
    }

    /// Index with one more unit in `axis`.
    pub fn raised(&self, axis: usize) -> Self {
        let mut e = self.0.clone();
        e[axis] += 1;
        MultiIndex(e)
    }

    /// Index with one unit fewer in `axis`, if that entry is positive.
    pub fn lowered(&self, axis: usize) -> Option<Self> {
        let mut e = self.0.clone();
        if e[axis] == 0 {
            return None;
        }
        e[axis] -= 1;
        Some(MultiIndex(e))
    }

    /// `x^alpha` for a real point.
    pub fn monomial<T: Scalar>(&self, x: &[T]) -> T {
        self.0
            .iter()
            .zip(x)
            .fold(T::one(), |acc, (&a, &xi)| acc * xi.powi(a as i32))
    }

    /// `x^alpha` for a complex point.
    pub fn monomial_complex<T: Scalar>(&self, x: &[Complex<T>]) -> Complex<T> {
        self.0
            .iter()
            .zip(x)
            .fold(Complex::new(T::one(), T::zero()), |acc, (&a, &xi)| {
                acc * xi.powi(a as i32)
            })
    }

    /// All indices in `n` variables with `|alpha| = order`, lexicographically descending.
    pub fn of_order(n: usize, order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; n];
        fill(&mut current, 0, order, &mut out);
        out
    }

    /// All indices in `n` variables with `|alpha| <= order`, grouped by increasing order.
    pub fn up_to_order(n: usize, order: u32) -> Vec<MultiIndex> {
        (0..=order).flat_map(|d| Self::of_order(n, d)).collect()
    }
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a;
        fill(current, pos + 1, remaining - a, out);
    }
    current[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        if trimmed.is_empty() {
            return Err(Error::Parse(format!("empty multi-index `{s}`")));
        }
        trimmed
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad multi-index entry `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(MultiIndex)
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
