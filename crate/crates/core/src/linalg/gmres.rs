//! Restarted GMRES for matrix-free linear operators.
//!
//! Arnoldi uses modified Gram-Schmidt with one re-orthogonalization pass; the
//! small least-squares problem is updated with Givens rotations. The relative
//! residual is measured against `‖rhs‖₂`.

use super::{axpy, dot, norm2, Scalar};

/// A linear map `y = A x` on vectors of length `dim()`.
pub trait LinearOperator<T: Scalar> {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[T], y: &mut [T]);
}

/// Wraps a closure as a [`LinearOperator`].
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<T: Scalar, F: Fn(&[T], &mut [T])> LinearOperator<T> for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, x: &[T], y: &mut [T]) {
        (self.f)(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GmresConfig {
    /// Relative residual target.
    pub tolerance: f64,
    /// Krylov steps per cycle.
    pub restart: usize,
    /// Cap on Krylov steps across all cycles.
    pub max_iters: usize,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-5,
            restart: 10,
            max_iters: 10_000,
        }
    }
}

impl GmresConfig {
    pub fn with_tolerance(self, tolerance: f64) -> Self {
        Self { tolerance, ..self }
    }
}

#[derive(Debug, Clone)]
pub struct GmresOutcome<T> {
    pub solution: Vec<T>,
    /// Krylov steps across all restarts.
    pub iterations: usize,
    /// Final relative residual `‖rhs - A x‖ / ‖rhs‖`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GmresError {
    #[error("operator dimension {op} does not match rhs {rhs} / initial guess {x0}")]
    DimensionMismatch { op: usize, rhs: usize, x0: usize },
    #[error("invalid GMRES configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("Arnoldi breakdown after {iterations} iterations with relative residual {residual:e}")]
    Breakdown { iterations: usize, residual: f64 },
    #[error("GMRES did not converge in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
}

pub fn gmres_solve<T, A>(
    op: &A,
    rhs: &[T],
    x0: &[T],
    cfg: &GmresConfig,
) -> Result<GmresOutcome<T>, GmresError>
where
    T: Scalar,
    A: LinearOperator<T> + ?Sized,
{
    let n = op.dim();
    if rhs.len() != n || x0.len() != n {
        return Err(GmresError::DimensionMismatch {
            op: n,
            rhs: rhs.len(),
            x0: x0.len(),
        });
    }
    if !(cfg.tolerance > 0.0) {
        return Err(GmresError::InvalidConfig("tolerance must be positive"));
    }
    if cfg.restart == 0 {
        return Err(GmresError::InvalidConfig("restart must be at least 1"));
    }

    let b_norm = norm2(rhs);
    if b_norm == 0.0 {
        return Ok(GmresOutcome {
            solution: vec![T::zero(); n],
            iterations: 0,
            residual: 0.0,
        });
    }

    let mut x = x0.to_vec();
    let mut r = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let mut total = 0usize;
    let m = cfg.restart.min(n.max(1));

    loop {
        residual_into(op, rhs, &x, &mut r, &mut w);
        let beta = norm2(&r);
        let rel = beta / b_norm;
        if rel <= cfg.tolerance {
            return Ok(GmresOutcome {
                solution: x,
                iterations: total,
                residual: rel,
            });
        }
        if total >= cfg.max_iters {
            return Err(GmresError::NotConverged {
                iterations: total,
                residual: rel,
            });
        }

        let mut basis: Vec<Vec<T>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|&ri| ri * T::from_real(1.0 / beta)).collect());
        // column-major Hessenberg: hess[j] has j+2 entries
        let mut hess: Vec<Vec<T>> = Vec::with_capacity(m);
        let mut rotations: Vec<(T, T)> = Vec::with_capacity(m);
        let mut g = vec![T::zero(); m + 1];
        g[0] = T::from_real(beta);
        let mut steps = 0usize;
        let mut breakdown = false;

        while steps < m && total < cfg.max_iters {
            let j = steps;
            op.apply(&basis[j], &mut w);
            let w_norm_initial = norm2(&w);
            let mut h = vec![T::zero(); j + 2];
            for _pass in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let hij = dot(v, &w);
                    axpy(-hij, v, &mut w);
                    h[i] += hij;
                }
            }
            let h_next = norm2(&w);
            h[j + 1] = T::from_real(h_next);
            steps += 1;
            total += 1;

            for (i, &(c, s)) in rotations.iter().enumerate() {
                let (a, b) = (h[i], h[i + 1]);
                h[i] = c.conj() * a + s.conj() * b;
                h[i + 1] = -s * a + c * b;
            }
            let (c, s) = givens(h[j], h[j + 1]);
            h[j] = c.conj() * h[j] + s.conj() * h[j + 1];
            h[j + 1] = T::zero();
            let (ga, gb) = (g[j], g[j + 1]);
            g[j] = c.conj() * ga + s.conj() * gb;
            g[j + 1] = -s * ga + c * gb;
            rotations.push((c, s));
            hess.push(h);

            if h_next <= f64::EPSILON * w_norm_initial.max(f64::MIN_POSITIVE) {
                breakdown = true;
                break;
            }
            basis.push(w.iter().map(|&wi| wi * T::from_real(1.0 / h_next)).collect());
            if g[j + 1].modulus() / b_norm <= cfg.tolerance {
                break;
            }
        }

        // back substitution on the triangular system
        let mut y = vec![T::zero(); steps];
        for i in (0..steps).rev() {
            let mut acc = g[i];
            for k in i + 1..steps {
                acc -= hess[k][i] * y[k];
            }
            y[i] = acc / hess[i][i];
        }
        for (k, &yk) in y.iter().enumerate() {
            axpy(yk, &basis[k], &mut x);
        }

        if breakdown {
            residual_into(op, rhs, &x, &mut r, &mut w);
            let rel = norm2(&r) / b_norm;
            if rel <= cfg.tolerance {
                return Ok(GmresOutcome {
                    solution: x,
                    iterations: total,
                    residual: rel,
                });
            }
            return Err(GmresError::Breakdown {
                iterations: total,
                residual: rel,
            });
        }
    }
}

fn residual_into<T: Scalar, A: LinearOperator<T> + ?Sized>(
    op: &A,
    rhs: &[T],
    x: &[T],
    r: &mut [T],
    scratch: &mut [T],
) {
    op.apply(x, scratch);
    for ((ri, &bi), &ai) in r.iter_mut().zip(rhs).zip(scratch.iter()) {
        *ri = bi - ai;
    }
}

/// Rotation `(c, s)` with `[c̄ s̄; -s c] (a, b)ᵀ = (r, 0)ᵀ`.
fn givens<T: Scalar>(a: T, b: T) -> (T, T) {
    let r = a.modulus().hypot(b.modulus());
    if r == 0.0 {
        return (T::one(), T::zero());
    }
    let inv = T::from_real(1.0 / r);
    (a * inv, b * inv)
}
