//! Fully implicit comparison integrators for linear split systems: implicit
//! midpoint and BDF-2. Both treat `f_fast + f_slow` implicitly.

use crate::linalg::{gmres_solve, FnOperator, GmresConfig, Scalar};
use crate::sdc::{LinearSplitSystem, SolveError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceScheme {
    Midpoint,
    Bdf2,
}

/// Output of one implicit step.
#[derive(Debug, Clone)]
pub struct ReferenceStep<T> {
    pub u_next: Vec<T>,
    pub iterations: usize,
}

fn full_tendency<T: Scalar, S: LinearSplitSystem<T> + ?Sized>(sys: &S, x: &[T], out: &mut [T], tmp: &mut [T]) {
    sys.eval_fast(x, out);
    sys.eval_slow(x, tmp);
    for (o, t) in out.iter_mut().zip(tmp.iter()) {
        *o += *t;
    }
}

/// Solve `(a I - b A) x = rhs` with GMRES.
fn solve_shifted<T: Scalar, S: LinearSplitSystem<T> + ?Sized>(
    sys: &S,
    a: f64,
    b: f64,
    rhs: &[T],
    guess: &[T],
    gmres: &GmresConfig,
) -> Result<ReferenceStep<T>, SolveError> {
    let n = sys.dimension();
    let op = FnOperator::new(n, |x: &[T], y: &mut [T]| {
        let mut tmp = vec![T::zero(); n];
        full_tendency(sys, x, y, &mut tmp);
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = T::from_real(a) * xi - T::from_real(b) * *yi;
        }
    });
    let out = gmres_solve(&op, rhs, guess, gmres)?;
    Ok(ReferenceStep { u_next: out.solution, iterations: out.iterations })
}

/// `(I - Δt/2 A) u_{n+1} = (I + Δt/2 A) u_n`
pub fn midpoint_step<T: Scalar, S: LinearSplitSystem<T> + ?Sized>(
    u: &[T],
    sys: &S,
    dt: f64,
    gmres: &GmresConfig,
) -> Result<ReferenceStep<T>, SolveError> {
    let n = sys.dimension();
    let mut rhs = vec![T::zero(); n];
    let mut tmp = vec![T::zero(); n];
    full_tendency(sys, u, &mut rhs, &mut tmp);
    let half = T::from_real(0.5 * dt);
    for (r, &ui) in rhs.iter_mut().zip(u) {
        *r = ui + half * *r;
    }
    solve_shifted(sys, 1.0, 0.5 * dt, &rhs, u, gmres)
}

/// `(3/2 I - Δt A) u_{n+1} = 2 u_n - 1/2 u_{n-1}`
pub fn bdf2_step<T: Scalar, S: LinearSplitSystem<T> + ?Sized>(
    u: &[T],
    u_prev: &[T],
    sys: &S,
    dt: f64,
    gmres: &GmresConfig,
) -> Result<ReferenceStep<T>, SolveError> {
    let rhs: Vec<T> = u
        .iter()
        .zip(u_prev)
        .map(|(&a, &b)| T::from_real(2.0) * a - T::from_real(0.5) * b)
        .collect();
    solve_shifted(sys, 1.5, dt, &rhs, u, gmres)
}

/// Time stepper holding the history BDF-2 needs. The first BDF-2 step is a
/// midpoint step.
#[derive(Debug, Clone)]
pub struct LinearStepper<T> {
    pub scheme: ReferenceScheme,
    pub dt: f64,
    pub gmres: GmresConfig,
    previous: Option<Vec<T>>,
    pub total_iterations: usize,
}

impl<T: Scalar> LinearStepper<T> {
    pub fn new(scheme: ReferenceScheme, dt: f64, gmres: GmresConfig) -> Self {
        Self { scheme, dt, gmres, previous: None, total_iterations: 0 }
    }

    pub fn step<S: LinearSplitSystem<T> + ?Sized>(&mut self, u: &[T], sys: &S) -> Result<Vec<T>, SolveError> {
        let out = match (self.scheme, &self.previous) {
            (ReferenceScheme::Bdf2, Some(prev)) => bdf2_step(u, prev, sys, self.dt, &self.gmres)?,
            _ => midpoint_step(u, sys, self.dt, &self.gmres)?,
        };
        self.total_iterations += out.iterations;
        if self.scheme == ReferenceScheme::Bdf2 {
            self.previous = Some(u.to_vec());
        }
        Ok(out.u_next)
    }
}
