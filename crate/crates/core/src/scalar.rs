//! Matrix-level analysis of the split scalar test equation
//! `u' = iλ_fast u + iλ_slow u`.

use crate::linalg::{CMatrix, LinalgError};
use crate::quadrature::QuadratureRule;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `|R|` above this counts as unstable; absorbs round-off at the boundary.
pub const STABILITY_THRESHOLD: f64 = 1.0 + 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarParams {
    pub lambda_fast: f64,
    pub lambda_slow: f64,
    pub dt: f64,
}

impl ScalarParams {
    pub fn new(lambda_fast: f64, lambda_slow: f64, dt: f64) -> Self {
        Self { lambda_fast, lambda_slow, dt }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda_fast + self.lambda_slow
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("at least one sweep is required")]
    NoSweeps,
    #[error("norm bound needs dt(|λ_fast| + |λ_slow|) < 1, got {0}")]
    StepTooLarge(f64),
    #[error("invalid scan range: {0}")]
    InvalidRange(&'static str),
}

/// Preconditioner `L`, remainder `R` and error propagation matrix `E = L⁻¹R`.
#[derive(Debug, Clone)]
pub struct IterationMatrices {
    pub l: CMatrix,
    pub r: CMatrix,
    pub e: CMatrix,
    pub l_inv: CMatrix,
}

pub fn build_matrices(p: &ScalarParams, rule: &QuadratureRule) -> Result<IterationMatrices, ScalarError> {
    let m = rule.num_nodes();
    let zf = I * p.lambda_fast * p.dt;
    let zs = I * p.lambda_slow * p.dt;
    let z = I * p.lambda() * p.dt;
    let implicit = &rule.q_fast_matrix().scale(zf) + &rule.q_slow_matrix().scale(zs);
    let l = &CMatrix::identity(m) - &implicit;
    let r = &rule.q_matrix().scale(z) - &implicit;
    let l_inv = l.inverse()?;
    let e = &l_inv * &r;
    Ok(IterationMatrices { l, r, e, l_inv })
}

/// Error propagation matrix in the limit λ_fast → ∞.
#[derive(Debug, Clone)]
pub struct StiffLimit {
    pub matrix: CMatrix,
    /// Set when the first node coincides with the step start and was dropped.
    pub reduced: bool,
}

/// `I - Q_fast⁻¹ Q`. When the first node sits at the step start its error is
/// always zero and the limit is taken on the remaining nodes.
pub fn stiff_limit_matrix(rule: &QuadratureRule) -> Result<StiffLimit, ScalarError> {
    let m = rule.num_nodes();
    let skip = usize::from(rule.dtau[0] == 0.0);
    let n = m - skip;
    let sub = |a: &[Vec<f64>]| CMatrix::from_fn(n, n, |i, j| Complex64::new(a[i + skip][j + skip], 0.0));
    let qf_inv = sub(&rule.q_fast).inverse()?;
    let matrix = &CMatrix::identity(n) - &(&qf_inv * &sub(&rule.q));
    Ok(StiffLimit { matrix, reduced: skip == 1 })
}

/// Amplification factor of one step with `sweeps` sweeps and the quadrature
/// end update, starting from copies of `u0 = 1`.
pub fn stability_function(p: &ScalarParams, rule: &QuadratureRule, sweeps: usize) -> Result<Complex64, ScalarError> {
    if sweeps == 0 {
        return Err(ScalarError::NoSweeps);
    }
    let mats = build_matrices(p, rule)?;
    let m = rule.num_nodes();
    let ones = vec![ONE; m];
    let l_inv_ones = mats.l_inv.matvec(&ones);
    // x_K = E^K 1 + Σ_{j<K} E^j L⁻¹ 1
    let mut x = ones;
    for _ in 0..sweeps {
        x = mats.e.matvec(&x);
        for (xi, bi) in x.iter_mut().zip(&l_inv_ones) {
            *xi += bi;
        }
    }
    Ok(ONE + end_quadrature(p, rule, &x))
}

fn end_quadrature(p: &ScalarParams, rule: &QuadratureRule, stages: &[Complex64]) -> Complex64 {
    let z = I * p.lambda() * p.dt;
    z * rule.q_end.iter().zip(stages).map(|(q, x)| x * q).sum::<Complex64>()
}

/// Stability function of the underlying collocation method,
/// `1 + iλΔt q_endᵀ (I - iλΔt Q)⁻¹ 1`.
pub fn collocation_stability(p: &ScalarParams, rule: &QuadratureRule) -> Result<Complex64, ScalarError> {
    let m = rule.num_nodes();
    let z = I * p.lambda() * p.dt;
    let a = &CMatrix::identity(m) - &rule.q_matrix().scale(z);
    let x = a.solve(&vec![ONE; m])?;
    Ok(ONE + end_quadrature(p, rule, &x))
}

/// `|R|` sampled on a rectangle of (Δtλ_slow, Δtλ_fast) with Δt = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityGrid {
    pub axis_slow: Vec<f64>,
    pub axis_fast: Vec<f64>,
    /// Row-major over (slow, fast).
    pub modulus: Vec<f64>,
    /// Cells with λ_fast < λ_slow.
    pub masked: Vec<bool>,
}

impl StabilityGrid {
    pub fn at(&self, i_slow: usize, j_fast: usize) -> f64 {
        self.modulus[i_slow * self.axis_fast.len() + j_fast]
    }

    pub fn is_stable(&self, i_slow: usize, j_fast: usize) -> bool {
        self.at(i_slow, j_fast) <= STABILITY_THRESHOLD
    }

    /// Unmasked cells where the two grids disagree on stability.
    pub fn stability_differences(&self, other: &StabilityGrid) -> usize {
        self.modulus
            .iter()
            .zip(&other.modulus)
            .zip(&self.masked)
            .filter(|((a, b), masked)| {
                !**masked && ((**a <= STABILITY_THRESHOLD) != (**b <= STABILITY_THRESHOLD))
            })
            .count()
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn scan_stability(
    rule: &QuadratureRule,
    sweeps: usize,
    slow_range: (f64, f64),
    fast_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<StabilityGrid, ScalarError> {
    if sweeps == 0 {
        return Err(ScalarError::NoSweeps);
    }
    for (lo, hi) in [slow_range, fast_range] {
        if !(lo >= 0.0 && hi > lo) {
            return Err(ScalarError::InvalidRange("ranges must satisfy 0 <= lo < hi"));
        }
    }
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(ScalarError::InvalidRange("need at least two samples per axis"));
    }
    let axis_slow = linspace(slow_range.0, slow_range.1, resolution.0);
    let axis_fast = linspace(fast_range.0, fast_range.1, resolution.1);
    let nf = axis_fast.len();
    let modulus = (0..axis_slow.len() * nf)
        .into_par_iter()
        .map(|idx| {
            let p = ScalarParams::new(axis_fast[idx % nf], axis_slow[idx / nf], 1.0);
            stability_function(&p, rule, sweeps).map(|r| r.norm())
        })
        .collect::<Result<Vec<f64>, ScalarError>>()?;
    let masked = (0..axis_slow.len() * nf)
        .map(|idx| axis_fast[idx % nf] < axis_slow[idx / nf])
        .collect();
    Ok(StabilityGrid { axis_slow, axis_fast, modulus, masked })
}

/// Comparison of `‖E‖∞` with the first-order bound `Δt(Λ_M + |λ_fast| + |λ_slow|) + CΔt²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBound {
    pub lhs: f64,
    pub rhs: f64,
    /// Quadratic coefficient estimated from `‖E‖∞` at Δt and Δt/2.
    pub quadratic: f64,
    pub holds: bool,
}

pub fn verify_norm_bound(p: &ScalarParams, rule: &QuadratureRule) -> Result<NormBound, ScalarError> {
    let scale = p.dt * (p.lambda_fast.abs() + p.lambda_slow.abs());
    if scale >= 1.0 {
        return Err(ScalarError::StepTooLarge(scale));
    }
    let norm_at = |dt: f64| -> Result<f64, ScalarError> {
        Ok(build_matrices(&ScalarParams { dt, ..*p }, rule)?.e.inf_norm())
    };
    let lhs = norm_at(p.dt)?;
    let half = norm_at(0.5 * p.dt)?;
    // ‖E(Δt)‖ ≈ aΔt + CΔt²  ⇒  ‖E(Δt)‖ - 2‖E(Δt/2)‖ = CΔt²/2
    let quadratic = if p.dt > 0.0 {
        (2.0 * (lhs - 2.0 * half) / (p.dt * p.dt)).max(0.0)
    } else {
        0.0
    };
    let linear = rule.lebesgue_constant() + p.lambda_fast.abs() + p.lambda_slow.abs();
    let rhs = p.dt * linear + quadratic * p.dt * p.dt;
    Ok(NormBound { lhs, rhs, quadratic, holds: lhs <= rhs * (1.0 + 1e-12) })
}

/// Spectral radius and ∞-norm of the error propagation matrix for one rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorMatrixSize {
    pub spectral_radius: f64,
    pub inf_norm: f64,
}

/// `λ_fast = None` selects the stiff limit.
pub fn error_matrix_size(
    rule: &QuadratureRule,
    lambda_fast: Option<f64>,
    lambda_slow: f64,
    dt: f64,
) -> Result<ErrorMatrixSize, ScalarError> {
    let e = match lambda_fast {
        None => stiff_limit_matrix(rule)?.matrix,
        Some(lf) => build_matrices(&ScalarParams::new(lf, lambda_slow, dt), rule)?.e,
    };
    Ok(ErrorMatrixSize { spectral_radius: e.spectral_radius()?, inf_norm: e.inf_norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{make_rule, NodeFamily};

    fn radau(m: usize) -> QuadratureRule {
        QuadratureRule::radau(m)
    }

    #[test]
    fn zero_frequencies() {
        let mats = build_matrices(&ScalarParams::new(0.0, 0.0, 1.0), &radau(3)).unwrap();
        assert_eq!(mats.l, CMatrix::identity(3));
        assert_eq!(mats.e.max_abs(), 0.0);
        let r = stability_function(&ScalarParams::new(0.0, 0.0, 1.0), &radau(3), 2).unwrap();
        assert_eq!(r, ONE);
    }

    #[test]
    fn single_node_algebra() {
        let p = ScalarParams::new(3.0, 0.0, 0.5);
        let mats = build_matrices(&p, &radau(1)).unwrap();
        assert!(mats.e[(0, 0)].norm() < 1e-15);
        let p = ScalarParams::new(3.0, 1.0, 0.5);
        let mats = build_matrices(&p, &radau(1)).unwrap();
        let expect = (I * 4.0 * 0.5 - I * 3.0 * 0.5) / (ONE - I * 3.0 * 0.5);
        assert!((mats.e[(0, 0)] - expect).norm() < 1e-15);
    }

    #[test]
    fn l_times_e_is_r() {
        let mats = build_matrices(&ScalarParams::new(7.0, 1.5, 0.8), &radau(4)).unwrap();
        let diff = &(&mats.l * &mats.e) - &mats.r;
        assert!(diff.max_abs() < 1e-12);
    }

    #[test]
    fn stiff_limit_single_node_vanishes() {
        let lim = stiff_limit_matrix(&radau(1)).unwrap();
        assert!(lim.matrix.max_abs() < 1e-15);
        assert!(!lim.reduced);
    }

    #[test]
    fn stiff_limit_lobatto_is_reduced() {
        let rule = make_rule(NodeFamily::GaussLobatto, 4, 0.0, 1.0).unwrap();
        let lim = stiff_limit_matrix(&rule).unwrap();
        assert!(lim.reduced);
        assert_eq!(lim.matrix.rows(), 3);
    }

    #[test]
    fn stiff_limit_is_limit_of_large_lambda() {
        let rule = radau(3);
        let lim = stiff_limit_matrix(&rule).unwrap().matrix.spectral_radius().unwrap();
        let big = build_matrices(&ScalarParams::new(1e8, 1.0, 1.0), &rule)
            .unwrap()
            .e
            .spectral_radius()
            .unwrap();
        assert!((lim - big).abs() < 1e-4);
    }

    #[test]
    fn many_sweeps_recover_collocation_stability() {
        let rule = radau(3);
        for &(lf, ls) in &[(0.5, 0.1), (1.0, 0.3), (2.0, 0.2)] {
            let p = ScalarParams::new(lf, ls, 1.0);
            assert!(build_matrices(&p, &rule).unwrap().e.spectral_radius().unwrap() < 1.0);
            let sdc = stability_function(&p, &rule, 25).unwrap();
            let coll = collocation_stability(&p, &rule).unwrap();
            assert!((sdc - coll).norm() < 1e-8, "{sdc} vs {coll}");
        }
    }

    #[test]
    fn stability_function_converges_to_exponential() {
        // |R - e^{iλΔt}| = O(Δt^{2M-1+1}) for the converged Radau(3) step
        let rule = radau(3);
        let err = |dt: f64| {
            let p = ScalarParams::new(1.0, 0.5, dt);
            (stability_function(&p, &rule, 25).unwrap() - (I * 1.5 * dt).exp()).norm()
        };
        let slope = (err(0.4) / err(0.2)).log2();
        assert!((slope - 6.0).abs() < 0.3, "slope {slope}");
    }

    #[test]
    fn norm_bound_precondition() {
        assert!(matches!(
            verify_norm_bound(&ScalarParams::new(2.0, 1.0, 0.5), &radau(3)),
            Err(ScalarError::StepTooLarge(_))
        ));
        let b = verify_norm_bound(&ScalarParams::new(0.0, 0.0, 0.5), &radau(3)).unwrap();
        assert!(b.holds && b.lhs == 0.0);
    }

    #[test]
    fn grid_masks_lower_triangle() {
        let g = scan_stability(&radau(2), 2, (0.0, 2.0), (0.0, 2.0), (3, 3)).unwrap();
        assert_eq!(g.modulus.len(), 9);
        assert!(g.masked[3] && !g.masked[4]);
        assert!(scan_stability(&radau(2), 0, (0.0, 1.0), (0.0, 1.0), (3, 3)).is_err());
        assert!(scan_stability(&radau(2), 1, (1.0, 1.0), (0.0, 1.0), (3, 3)).is_err());
    }
}
