use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::sphere::Expansion;

/// Monomial coefficients of the homogeneous polynomial `|x|^d e(x/|x|)` in the plane, using
/// `r^d cos(l phi) = (x^2 + y^2)^{(d-l)/2} Re (x + iy)^l` and the analogous sine identity.
/// Requires every degree `l` present in `e` to satisfy `l <= d` and `l = d mod 2`.
pub fn harmonic_to_monomials(e: &Expansion<f64>, d: usize) -> Result<BTreeMap<MultiIndex, f64>> {
    if e.dim() != 2 {
        return Err(Error::UnsupportedDimension(e.dim()));
    }
    let mut out: BTreeMap<MultiIndex, f64> = BTreeMap::new();
    let inv_pi = 1.0 / std::f64::consts::PI.sqrt();
    for l in 0..=e.degree_max() {
        let (c, s) = if l == 0 {
            (
                e.coefficient(0, 0) / (2.0 * std::f64::consts::PI).sqrt(),
                0.0,
            )
        } else {
            (e.coefficient(l, 1) * inv_pi, e.coefficient(l, -1) * inv_pi)
        };
        if c == 0.0 && s == 0.0 {
            continue;
        }
        if l > d || (d - l) % 2 == 1 {
            return Err(Error::invalid(
                "degree",
                format!("degree {l} cannot form a polynomial of degree {d}"),
            ));
        }
        let p = (d - l) / 2;
        // (x + iy)^l = sum_m C(l, m) x^{l-m} (iy)^m
        for m in 0..=l {
            let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let weight = if m % 2 == 0 { c } else { s } * sign * binomial(l, m);
            if weight == 0.0 {
                continue;
            }
            for q in 0..=p {
                let alpha = MultiIndex::new(vec![(l - m + 2 * q) as u32, (m + 2 * (p - q)) as u32]);
                *out.entry(alpha).or_insert(0.0) += weight * binomial(p, q);
            }
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_polar_form() {
        let mut e = Expansion::<f64>::zeros(2, 4);
        e.set_coefficient(0, 0, 0.3);
        e.set_coefficient(2, 1, -0.7);
        e.set_coefficient(2, -1, 0.2);
        e.set_coefficient(4, 1, 0.05);
        e.set_coefficient(4, -1, -0.4);
        let b = harmonic_to_monomials(&e, 4).unwrap();
        for x in [[0.3f64, -1.2], [0.9, 0.4], [-0.2, 0.05]] {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            let polar = r.powi(4) * e.evaluate(&[x[0] / r, x[1] / r]);
            let mono: f64 = b.iter().map(|(a, c)| c * a.monomial(&x)).sum();
            assert!((polar - mono).abs() < 1e-13 * (1.0 + polar.abs()));
        }
        assert!(b.keys().all(|a| a.order() == 4));
    }

    #[test]
    fn rejects_non_polynomials() {
        let mut e = Expansion::<f64>::zeros(2, 3);
        e.set_coefficient(3, 1, 1.0);
        assert!(harmonic_to_monomials(&e, 2).is_err());
        assert!(harmonic_to_monomials(&Expansion::zeros(3, 1), 2).is_err());
    }
}
