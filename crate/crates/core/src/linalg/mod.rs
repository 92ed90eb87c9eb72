//! Dense complex linear algebra at collocation scale and a restarted GMRES
//! solver for the matrix-free implicit systems at PDE scale.

mod dense;
mod eigen;
mod gmres;

pub use dense::CMatrix;
pub use gmres::{gmres_solve, FnOperator, GmresConfig, GmresError, GmresOutcome, LinearOperator};

use num_complex::Complex64;
use num_traits::NumAssign;
use std::fmt::Debug;
use std::ops::Neg;

/// Errors raised by the dense routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is singular: pivot {pivot} has magnitude {magnitude:e}")]
    Singular { pivot: usize, magnitude: f64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

/// Scalar field the Krylov solver is generic over: real at PDE scale,
/// complex at analysis scale.
pub trait Scalar: NumAssign + Neg<Output = Self> + Copy + Send + Sync + Debug + 'static {
    fn conj(self) -> Self;
    fn modulus(self) -> f64;
    fn from_real(x: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

/// Hermitian inner product, conjugating the first argument.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + x.conj() * y)
}

pub fn norm2<T: Scalar>(a: &[T]) -> f64 {
    a.iter()
        .map(|x| {
            let m = x.modulus();
            m * m
        })
        .sum::<f64>()
        .sqrt()
}

pub fn norm_inf<T: Scalar>(a: &[T]) -> f64 {
    a.iter().fold(0.0, |acc, x| acc.max(x.modulus()))
}

/// `y += alpha * x`
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
