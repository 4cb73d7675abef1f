use crate::error::Result;
use crate::multi_index::MultiIndex;
use crate::operator::{fd_derivative, ScalarField};
use crate::scalar::{lit, Scalar};

use super::radial::{Term, TermSum};

/// Günter derivative `D_j G(theta) = d_j G - theta_j sum_l theta_l d_l G` of an ambient field,
/// with the gradient taken by finite differences.
pub fn gunter_derivative_field<T: Scalar, F: ScalarField<T> + ?Sized>(
    g: &F,
    theta: &[T],
    j: usize,
) -> Result<T> {
    let n = theta.len();
    let h: T = lit(1e-2);
    let mut grad = Vec::with_capacity(n);
    for axis in 0..n {
        grad.push(fd_derivative(g, theta, &MultiIndex::unit(n, axis), h)?);
    }
    let radial: T = grad.iter().zip(theta).map(|(&a, &b)| a * b).sum();
    Ok(grad[j] - theta[j] * radial)
}

/// `Delta` of a term through two passes of the Günter product rule
/// `d_h(r^m f) = r^{m-1}(D_h f + m theta_h f)`; cross-check for the eigenvalue route.
pub fn laplacian_via_gunter<T: Scalar>(term: &Term<T>) -> TermSum<T> {
    let n = term.angular.dim();
    let single = TermSum::from_term(term.clone());
    let mut out = TermSum::new(n);
    for h in 0..n {
        out.extend(single.partial(h).partial(h));
    }
    out
}
