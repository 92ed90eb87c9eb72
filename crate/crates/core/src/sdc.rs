//! Fast-wave slow-wave SDC: IMEX node-to-node sweeps over one collocation step.
//!
//! The fast tendency is integrated with implicit Euler between nodes and the
//! slow tendency with explicit Euler. Repeated sweeps converge to the
//! collocation solution of the full (unsplit) problem.

use crate::linalg::{
    gmres_solve, norm_inf, CMatrix, FnOperator, GmresConfig, GmresError, LinalgError, Scalar,
};
use crate::quadrature::QuadratureRule;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Result of one implicit solve `u - alpha f_fast(u) = rhs`.
#[derive(Debug, Clone)]
pub struct ImplicitSolve<T> {
    pub solution: Vec<T>,
    /// Inner iterations spent, zero for direct solvers.
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Gmres(#[from] GmresError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An ODE `u' = f_fast(u) + f_slow(u)` with a solver for the fast part.
pub trait SplitSystem<T: Scalar> {
    fn dimension(&self) -> usize;
    fn eval_fast(&self, u: &[T], out: &mut [T]);
    fn eval_slow(&self, u: &[T], out: &mut [T]);
    /// Solve `u - alpha f_fast(u) = rhs` to tolerance `tol`, starting from `guess`.
    fn solve_implicit(
        &self,
        alpha: f64,
        rhs: &[T],
        guess: &[T],
        tol: f64,
    ) -> Result<ImplicitSolve<T>, SolveError>;
}

/// Marker for systems whose tendencies are linear in `u`.
pub trait LinearSplitSystem<T: Scalar>: SplitSystem<T> {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateMode {
    /// `u0 + Δt Σ_j q_j f(U_j)`
    #[default]
    QuadratureUpdate,
    /// Copy the last stage; requires the right endpoint to be a node.
    LastNode,
}

impl std::str::FromStr for UpdateMode {
    type Err = SdcError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quadrature" | "quadrature-update" => Ok(UpdateMode::QuadratureUpdate),
            "last-node" | "lastnode" => Ok(UpdateMode::LastNode),
            _ => Err(SdcError::InvalidConfig("unknown update mode")),
        }
    }
}

/// Inner tolerance used on the first sweep, before any sweep residual exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FirstSweepTolerance {
    #[default]
    Floor,
    /// Scale the residual of the initial copy state.
    InitialResidual,
}

#[derive(Debug, Clone)]
pub struct SdcConfig {
    pub rule: QuadratureRule,
    /// Maximum number of sweeps K.
    pub sweeps: usize,
    /// Stop early once the residual drops below this.
    pub residual_tol: Option<f64>,
    pub update_mode: UpdateMode,
    /// Inner solves use `max(factor · ‖r‖∞ / ‖u0‖∞, floor)` as relative tolerance.
    pub inner_tol_factor: f64,
    pub inner_tol_floor: f64,
    pub first_sweep_tolerance: FirstSweepTolerance,
}

impl SdcConfig {
    pub fn new(rule: QuadratureRule, sweeps: usize) -> Self {
        Self {
            rule,
            sweeps,
            residual_tol: None,
            update_mode: UpdateMode::default(),
            inner_tol_factor: 0.1,
            inner_tol_floor: 1e-5,
            first_sweep_tolerance: FirstSweepTolerance::default(),
        }
    }

    pub fn with_inner_tolerance(mut self, factor: f64, floor: f64) -> Self {
        self.inner_tol_factor = factor;
        self.inner_tol_floor = floor;
        self
    }

    pub fn with_update_mode(mut self, mode: UpdateMode) -> Self {
        self.update_mode = mode;
        self
    }

    pub fn with_residual_tol(mut self, tol: f64) -> Self {
        self.residual_tol = Some(tol);
        self
    }

    pub fn validate(&self) -> Result<(), SdcError> {
        if self.sweeps == 0 {
            return Err(SdcError::InvalidConfig("at least one sweep is required"));
        }
        if !(self.inner_tol_factor > 0.0 && self.inner_tol_factor <= 1.0) {
            return Err(SdcError::InvalidConfig("inner tolerance factor must lie in (0, 1]"));
        }
        if !(self.inner_tol_floor > 0.0) {
            return Err(SdcError::InvalidConfig("inner tolerance floor must be positive"));
        }
        if self.update_mode == UpdateMode::LastNode && !self.rule.family.includes_right_endpoint() {
            return Err(SdcError::InvalidConfig(
                "last-node update needs the right endpoint as a node",
            ));
        }
        Ok(())
    }

    /// The residual is scaled by the size of the state so that it is
    /// comparable with the solver's relative tolerance.
    fn inner_tolerance(&self, residual: f64, scale: f64) -> f64 {
        let relative = if scale > 0.0 { residual / scale } else { residual };
        (self.inner_tol_factor * relative).max(self.inner_tol_floor)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SdcError {
    #[error("invalid SDC configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("state has length {got}, system dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("implicit solve failed at node {node} in sweep {sweep}: {source}")]
    ImplicitSolve {
        node: usize,
        sweep: usize,
        #[source]
        source: SolveError,
    },
}

/// Stage values of one step and cached tendencies at those stages.
#[derive(Debug, Clone)]
pub struct SweepState<T> {
    pub u0: Vec<T>,
    pub stages: Vec<Vec<T>>,
    /// Sweeps performed so far.
    pub sweep: usize,
    pub residual_norm: f64,
    pub inner_iterations: usize,
    /// Calls to `solve_implicit` so far.
    pub implicit_solves: usize,
    slow0: Vec<T>,
    fast: Vec<Vec<T>>,
    slow: Vec<Vec<T>>,
}

impl<T: Scalar> SweepState<T> {
    /// Copy `u0` to every node.
    pub fn initialize<S: SplitSystem<T> + ?Sized>(
        u0: &[T],
        sys: &S,
        cfg: &SdcConfig,
        dt: f64,
    ) -> Result<Self, SdcError> {
        let n = sys.dimension();
        if u0.len() != n {
            return Err(SdcError::DimensionMismatch { expected: n, got: u0.len() });
        }
        let m = cfg.rule.num_nodes();
        let mut fast0 = vec![T::zero(); n];
        let mut slow0 = vec![T::zero(); n];
        sys.eval_fast(u0, &mut fast0);
        sys.eval_slow(u0, &mut slow0);
        let mut state = Self {
            u0: u0.to_vec(),
            stages: vec![u0.to_vec(); m],
            sweep: 0,
            residual_norm: 0.0,
            inner_iterations: 0,
            implicit_solves: 0,
            fast: vec![fast0; m],
            slow: vec![slow0.clone(); m],
            slow0,
        };
        state.residual_norm = max_norm(&state.residual(cfg, dt));
        Ok(state)
    }

    /// Replace the stages, refreshing the cached tendencies and the residual.
    pub fn set_stages<S: SplitSystem<T> + ?Sized>(
        &mut self,
        stages: Vec<Vec<T>>,
        sys: &S,
        cfg: &SdcConfig,
        dt: f64,
    ) {
        for (m, stage) in stages.iter().enumerate() {
            sys.eval_fast(stage, &mut self.fast[m]);
            sys.eval_slow(stage, &mut self.slow[m]);
        }
        self.stages = stages;
        self.residual_norm = max_norm(&self.residual(cfg, dt));
    }

    /// `r_m = u0 + Δt Σ_j q_{m,j} f(U_j) - U_m` for every node.
    pub fn residual(&self, cfg: &SdcConfig, dt: f64) -> Vec<Vec<T>> {
        let n = self.u0.len();
        cfg.rule
            .q
            .iter()
            .zip(&self.stages)
            .map(|(q_row, stage)| {
                let mut r = self.u0.clone();
                for (j, &q) in q_row.iter().enumerate() {
                    let w = T::from_real(dt * q);
                    for i in 0..n {
                        r[i] += w * (self.fast[j][i] + self.slow[j][i]);
                    }
                }
                for i in 0..n {
                    r[i] -= stage[i];
                }
                r
            })
            .collect()
    }

    /// One IMEX node-to-node sweep. Returns the inner iterations it used.
    pub fn sweep<S: SplitSystem<T> + ?Sized>(
        &mut self,
        sys: &S,
        cfg: &SdcConfig,
        dt: f64,
    ) -> Result<usize, SdcError> {
        let n = self.u0.len();
        let m_nodes = self.stages.len();
        let rule = &cfg.rule;
        let tol = match (self.sweep, cfg.first_sweep_tolerance) {
            (0, FirstSweepTolerance::Floor) => cfg.inner_tol_floor,
            _ => cfg.inner_tolerance(self.residual_norm, norm_inf(&self.u0)),
        };
        let dtau = rule.dtau_normalized();

        // Δt Σ_j s_{m,j} f(u_j^k), from the stages of the previous sweep
        let integrals: Vec<Vec<T>> = rule
            .s
            .iter()
            .map(|s_row| {
                let mut acc = vec![T::zero(); n];
                for (j, &s) in s_row.iter().enumerate() {
                    let w = T::from_real(dt * s);
                    for i in 0..n {
                        acc[i] += w * (self.fast[j][i] + self.slow[j][i]);
                    }
                }
                acc
            })
            .collect();

        let mut new_fast = Vec::with_capacity(m_nodes);
        let mut new_slow: Vec<Vec<T>> = Vec::with_capacity(m_nodes);
        let mut used = 0;
        let mut rhs = vec![T::zero(); n];
        for m in 0..m_nodes {
            let a = dt * dtau[m];
            let ta = T::from_real(a);
            let (prev_new, prev_slow_new, prev_slow_old) = if m == 0 {
                (&self.u0, &self.slow0, &self.slow0)
            } else {
                (&self.stages[m - 1], &new_slow[m - 1], &self.slow[m - 1])
            };
            for i in 0..n {
                rhs[i] = prev_new[i]
                    + ta * (prev_slow_new[i] - prev_slow_old[i] - self.fast[m][i])
                    + integrals[m][i];
            }
            let stage = if a == 0.0 {
                rhs.clone()
            } else {
                let solved = sys
                    .solve_implicit(a, &rhs, &self.stages[m], tol)
                    .map_err(|source| SdcError::ImplicitSolve {
                        node: m + 1,
                        sweep: self.sweep + 1,
                        source,
                    })?;
                used += solved.iterations;
                self.implicit_solves += 1;
                solved.solution
            };
            let mut f = vec![T::zero(); n];
            let mut g = vec![T::zero(); n];
            sys.eval_fast(&stage, &mut f);
            sys.eval_slow(&stage, &mut g);
            self.stages[m] = stage;
            new_fast.push(f);
            new_slow.push(g);
        }
        self.fast = new_fast;
        self.slow = new_slow;
        self.sweep += 1;
        self.inner_iterations += used;
        self.residual_norm = max_norm(&self.residual(cfg, dt));
        Ok(used)
    }

    /// The state at the end of the step.
    pub fn end_value(&self, cfg: &SdcConfig, dt: f64) -> Vec<T> {
        match cfg.update_mode {
            UpdateMode::LastNode => self.stages.last().cloned().unwrap_or_else(|| self.u0.clone()),
            UpdateMode::QuadratureUpdate => {
                let n = self.u0.len();
                let mut u = self.u0.clone();
                for (j, &q) in cfg.rule.q_end.iter().enumerate() {
                    let w = T::from_real(dt * q);
                    for i in 0..n {
                        u[i] += w * (self.fast[j][i] + self.slow[j][i]);
                    }
                }
                u
            }
        }
    }
}

fn max_norm<T: Scalar>(r: &[Vec<T>]) -> f64 {
    r.iter().map(|v| norm_inf(v)).fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct StepOutcome<T> {
    pub u_next: Vec<T>,
    pub sweeps: usize,
    pub inner_iterations: usize,
    pub implicit_solves: usize,
    /// Residual after each sweep.
    pub residuals: Vec<f64>,
    /// Inner iterations of each sweep.
    pub sweep_iterations: Vec<usize>,
}

/// Advance `u0` by one step of length `dt`.
pub fn step<T: Scalar, S: SplitSystem<T> + ?Sized>(
    u0: &[T],
    sys: &S,
    cfg: &SdcConfig,
    dt: f64,
) -> Result<StepOutcome<T>, SdcError> {
    cfg.validate()?;
    let mut state = SweepState::initialize(u0, sys, cfg, dt)?;
    let mut residuals = Vec::with_capacity(cfg.sweeps);
    let mut sweep_iterations = Vec::with_capacity(cfg.sweeps);
    for _ in 0..cfg.sweeps {
        sweep_iterations.push(state.sweep(sys, cfg, dt)?);
        residuals.push(state.residual_norm);
        if cfg.residual_tol.is_some_and(|tol| state.residual_norm <= tol) {
            break;
        }
    }
    Ok(StepOutcome {
        u_next: state.end_value(cfg, dt),
        sweeps: state.sweep,
        inner_iterations: state.inner_iterations,
        implicit_solves: state.implicit_solves,
        residuals,
        sweep_iterations,
    })
}

/// Collocation stages from `(I - Δt Q ⊗ A) U = U0`, solved with GMRES on the
/// stacked stage vector.
pub fn solve_collocation<T: Scalar, S: LinearSplitSystem<T> + ?Sized>(
    u0: &[T],
    sys: &S,
    rule: &QuadratureRule,
    dt: f64,
    gmres: &GmresConfig,
) -> Result<Vec<Vec<T>>, SolveError> {
    let n = sys.dimension();
    let m = rule.num_nodes();
    let op = FnOperator::new(n * m, |x: &[T], y: &mut [T]| {
        let mut fx = vec![T::zero(); n * m];
        let mut tmp = vec![T::zero(); n];
        for j in 0..m {
            let block = &x[j * n..(j + 1) * n];
            sys.eval_fast(block, &mut fx[j * n..(j + 1) * n]);
            sys.eval_slow(block, &mut tmp);
            for i in 0..n {
                fx[j * n + i] += tmp[i];
            }
        }
        y.copy_from_slice(x);
        for row in 0..m {
            for j in 0..m {
                let w = T::from_real(dt * rule.q[row][j]);
                for i in 0..n {
                    y[row * n + i] -= w * fx[j * n + i];
                }
            }
        }
    });
    let rhs: Vec<T> = (0..m).flat_map(|_| u0.iter().copied()).collect();
    let out = gmres_solve(&op, &rhs, &rhs, gmres)?;
    Ok(out.solution.chunks(n).map(|c| c.to_vec()).collect())
}

/// Small linear system `u' = A_fast u + A_slow u` with dense matrices.
#[derive(Debug, Clone)]
pub struct DenseSplitSystem {
    pub fast: CMatrix,
    pub slow: CMatrix,
}

impl DenseSplitSystem {
    pub fn new(fast: CMatrix, slow: CMatrix) -> Result<Self, LinalgError> {
        if !fast.is_square() {
            return Err(LinalgError::NotSquare { rows: fast.rows(), cols: fast.cols() });
        }
        if fast.rows() != slow.rows() || fast.cols() != slow.cols() {
            return Err(LinalgError::DimensionMismatch { left: fast.rows(), right: slow.rows() });
        }
        Ok(Self { fast, slow })
    }

    /// The scalar test equation `u' = iλ_fast u + iλ_slow u`.
    pub fn scalar(lambda_fast: f64, lambda_slow: f64) -> Self {
        Self {
            fast: CMatrix::diag(&[Complex64::new(0.0, lambda_fast)]),
            slow: CMatrix::diag(&[Complex64::new(0.0, lambda_slow)]),
        }
    }

    /// Stages of the collocation solution via a dense Kronecker solve.
    pub fn collocation_stages(
        &self,
        u0: &[Complex64],
        rule: &QuadratureRule,
        dt: f64,
    ) -> Result<Vec<Vec<Complex64>>, LinalgError> {
        let n = self.fast.rows();
        let m = rule.num_nodes();
        let a = &self.fast + &self.slow;
        let q = rule.q_matrix().scale(Complex64::new(dt, 0.0));
        let sys = &CMatrix::identity(n * m) - &q.kron(&a);
        let rhs: Vec<Complex64> = (0..m).flat_map(|_| u0.iter().copied()).collect();
        let u = sys.solve(&rhs)?;
        Ok(u.chunks(n).map(|c| c.to_vec()).collect())
    }
}

impl SplitSystem<Complex64> for DenseSplitSystem {
    fn dimension(&self) -> usize {
        self.fast.rows()
    }

    fn eval_fast(&self, u: &[Complex64], out: &mut [Complex64]) {
        out.copy_from_slice(&self.fast.matvec(u));
    }

    fn eval_slow(&self, u: &[Complex64], out: &mut [Complex64]) {
        out.copy_from_slice(&self.slow.matvec(u));
    }

    fn solve_implicit(
        &self,
        alpha: f64,
        rhs: &[Complex64],
        _guess: &[Complex64],
        _tol: f64,
    ) -> Result<ImplicitSolve<Complex64>, SolveError> {
        let n = self.fast.rows();
        let lhs = &CMatrix::identity(n) - &self.fast.scale(Complex64::new(alpha, 0.0));
        Ok(ImplicitSolve { solution: lhs.solve(rhs)?, iterations: 0 })
    }
}

impl LinearSplitSystem<Complex64> for DenseSplitSystem {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{make_rule, NodeFamily};

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn run(sys: &DenseSplitSystem, cfg: &SdcConfig, u0: Complex64, dt: f64) -> Complex64 {
        step(&[u0], sys, cfg, dt).unwrap().u_next[0]
    }

    #[test]
    fn zero_tendency_leaves_state_unchanged() {
        let sys = DenseSplitSystem::scalar(0.0, 0.0);
        let cfg = SdcConfig::new(QuadratureRule::radau(3), 4);
        let u0 = [c(1.0), c(2.0)];
        let sys2 = DenseSplitSystem::new(CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)).unwrap();
        let mut st = SweepState::initialize(&u0, &sys2, &cfg, 0.1).unwrap();
        assert_eq!(st.stages.len(), 3);
        st.sweep(&sys2, &cfg, 0.1).unwrap();
        assert!(st.stages.iter().all(|s| s == &u0.to_vec()));
        assert_eq!(run(&sys, &cfg, c(1.5), 0.3), c(1.5));
    }

    #[test]
    fn initial_residual_is_row_sum() {
        let lam = 2.0;
        let sys = DenseSplitSystem::scalar(lam, 0.0);
        let cfg = SdcConfig::new(QuadratureRule::radau(3), 1);
        let dt = 0.2;
        let st = SweepState::initialize(&[c(1.0)], &sys, &cfg, dt).unwrap();
        for (r, tau) in st.residual(&cfg, dt).iter().zip(&cfg.rule.nodes) {
            let expect = I * lam * tau * dt;
            assert!((r[0] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn single_node_single_sweep_is_implicit_euler() {
        let lam = 3.0;
        let dt = 0.4;
        let sys = DenseSplitSystem::scalar(lam, 0.0);
        let cfg = SdcConfig::new(QuadratureRule::radau(1), 1);
        let got = run(&sys, &cfg, c(1.0), dt);
        let expect = c(1.0) / (c(1.0) - I * lam * dt);
        assert!((got - expect).norm() < 1e-14);
        let last = run(&sys, &cfg.clone().with_update_mode(UpdateMode::LastNode), c(1.0), dt);
        assert!((last - expect).norm() < 1e-14);
    }

    #[test]
    fn collocation_is_a_fixed_point() {
        let sys = DenseSplitSystem::scalar(4.0, 1.0);
        let cfg = SdcConfig::new(QuadratureRule::radau(3), 1);
        let dt = 0.3;
        let stages = sys.collocation_stages(&[c(1.0)], &cfg.rule, dt).unwrap();
        let mut fresh = SweepState::initialize(&[c(1.0)], &sys, &cfg, dt).unwrap();
        fresh.set_stages(stages.clone(), &sys, &cfg, dt);
        assert!(fresh.residual_norm < 1e-13);
        fresh.sweep(&sys, &cfg, dt).unwrap();
        for (a, b) in fresh.stages.iter().zip(&stages) {
            assert!((a[0] - b[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn many_sweeps_reach_collocation() {
        let sys = DenseSplitSystem::scalar(2.0, 0.5);
        let rule = QuadratureRule::radau(3);
        let dt = 0.1;
        let stages = sys.collocation_stages(&[c(1.0)], &rule, dt).unwrap();
        let coll_end = c(1.0)
            + rule
                .q_end
                .iter()
                .zip(&stages)
                .map(|(q, s)| I * 2.5 * dt * q * s[0])
                .sum::<Complex64>();
        let cfg = SdcConfig::new(rule, 25);
        let got = run(&sys, &cfg, c(1.0), dt);
        assert!((got - coll_end).norm() < 1e-12);
    }

    #[test]
    fn gmres_collocation_matches_dense() {
        let sys = DenseSplitSystem::scalar(3.0, 1.0);
        let rule = make_rule(NodeFamily::GaussLobatto, 4, 0.0, 1.0).unwrap();
        let dense = sys.collocation_stages(&[c(1.0)], &rule, 0.2).unwrap();
        let krylov = solve_collocation(
            &[c(1.0)],
            &sys,
            &rule,
            0.2,
            &GmresConfig::default().with_tolerance(1e-14),
        )
        .unwrap();
        for (a, b) in dense.iter().zip(&krylov) {
            assert!((a[0] - b[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn residual_contracts_for_small_steps() {
        let sys = DenseSplitSystem::scalar(0.6, 0.3);
        let cfg = SdcConfig::new(QuadratureRule::radau(3), 8);
        let out = step(&[c(1.0)], &sys, &cfg, 0.9).unwrap();
        assert!(out.residuals.windows(2).all(|w| w[1] < w[0]), "{:?}", out.residuals);
    }

    #[test]
    fn residual_tolerance_stops_early() {
        let sys = DenseSplitSystem::scalar(1.0, 0.5);
        let cfg = SdcConfig::new(QuadratureRule::radau(3), 50).with_residual_tol(1e-10);
        let out = step(&[c(1.0)], &sys, &cfg, 0.1).unwrap();
        assert!(out.sweeps < 50);
        assert!(*out.residuals.last().unwrap() <= 1e-10);
    }

    #[test]
    fn lobatto_first_node_is_a_copy() {
        let sys = DenseSplitSystem::scalar(2.0, 1.0);
        let rule = make_rule(NodeFamily::GaussLobatto, 3, 0.0, 1.0).unwrap();
        let cfg = SdcConfig::new(rule, 3);
        let mut st = SweepState::initialize(&[c(0.7)], &sys, &cfg, 0.5).unwrap();
        st.sweep(&sys, &cfg, 0.5).unwrap();
        assert_eq!(st.stages[0][0], c(0.7));
    }

    #[test]
    fn config_validation() {
        let rule = make_rule(NodeFamily::GaussLegendre, 3, 0.0, 1.0).unwrap();
        let cfg = SdcConfig::new(rule.clone(), 2).with_update_mode(UpdateMode::LastNode);
        assert!(cfg.validate().is_err());
        assert!(SdcConfig::new(rule.clone(), 0).validate().is_err());
        assert!(SdcConfig::new(rule, 2).with_inner_tolerance(1.5, 1e-5).validate().is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let sys = DenseSplitSystem::scalar(1.0, 1.0);
        let cfg = SdcConfig::new(QuadratureRule::radau(2), 1);
        assert!(matches!(
            step(&[c(1.0), c(2.0)], &sys, &cfg, 0.1),
            Err(SdcError::DimensionMismatch { expected: 1, got: 2 })
        ));
    }
}
