//! Kernels `z -> K(z)` usable in layer potentials.

use std::sync::Arc;

use crate::assembly::FundamentalSolutionTable;
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;

/// A real kernel on `R^n \ {0}` with optional partial derivatives.
pub trait KernelHandle: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, z: &[f64]) -> Result<f64>;

    /// `d^beta K(z)`; the default provides only `beta = 0`.
    fn derivative(&self, z: &[f64], beta: &MultiIndex) -> Result<f64> {
        if beta.order() == 0 {
            self.value(z)
        } else {
            Err(Error::MissingDerivative(beta.entries().to_vec()))
        }
    }

    /// Radius of the ball on which the kernel is defined.
    fn validity_radius(&self) -> f64 {
        f64::INFINITY
    }
}

impl KernelHandle for FundamentalSolutionTable {
    fn dim(&self) -> usize {
        FundamentalSolutionTable::dim(self)
    }

    fn value(&self, z: &[f64]) -> Result<f64> {
        self.eval_s(z)
    }

    fn derivative(&self, z: &[f64], beta: &MultiIndex) -> Result<f64> {
        if beta.order() == 0 {
            return self.eval_s(z);
        }
        if beta.order() >= 2 * self.k() {
            return Err(Error::MissingDerivative(beta.entries().to_vec()));
        }
        self.eval_s_derivative(z, beta)
    }

    fn validity_radius(&self) -> f64 {
        self.r_valid()
    }
}

impl<K: KernelHandle + ?Sized> KernelHandle for &K {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, z: &[f64]) -> Result<f64> {
        (**self).value(z)
    }

    fn derivative(&self, z: &[f64], beta: &MultiIndex) -> Result<f64> {
        (**self).derivative(z, beta)
    }

    fn validity_radius(&self) -> f64 {
        (**self).validity_radius()
    }
}

impl<K: KernelHandle + ?Sized> KernelHandle for Arc<K> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, z: &[f64]) -> Result<f64> {
        (**self).value(z)
    }

    fn derivative(&self, z: &[f64], beta: &MultiIndex) -> Result<f64> {
        (**self).derivative(z, beta)
    }

    fn validity_radius(&self) -> f64 {
        (**self).validity_radius()
    }
}

/// `factor * K`.
#[derive(Debug, Clone)]
pub struct ScaledKernel<K> {
    pub inner: K,
    pub factor: f64,
}

impl<K: KernelHandle> KernelHandle for ScaledKernel<K> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, z: &[f64]) -> Result<f64> {
        Ok(self.factor * self.inner.value(z)?)
    }

    fn derivative(&self, z: &[f64], beta: &MultiIndex) -> Result<f64> {
        Ok(self.factor * self.inner.derivative(z, beta)?)
    }

    fn validity_radius(&self) -> f64 {
        self.inner.validity_radius()
    }
}
