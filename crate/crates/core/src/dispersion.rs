//! Semi-discrete dispersion relation for the acoustic-advection system
//! `u_t + U u_x + c p_x = 0`, `p_t + U p_x + c u_x = 0`.
//!
//! For a plane wave the system reduces to a 2×2 ODE per wavenumber. A time
//! integrator then acts as a 2×2 update matrix `Z` whose eigenvalues
//! `z = e^{-iωΔt}` define the discrete frequencies ω.

use crate::linalg::{CMatrix, LinalgError};
use crate::problems::{Stencil1D, StencilError};
use crate::quadrature::QuadratureRule;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DispersionError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Stencil(#[from] StencilError),
    #[error("expected a 2x2 update matrix, got {0}x{1}")]
    NotTwoByTwo(usize, usize),
    #[error("invalid wave parameters: {0}")]
    InvalidParams(&'static str),
}

/// Replacement for `iκ` in the semi-discrete system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpatialSymbol {
    Exact,
    CenteredFd { order: usize, dx: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    pub u_adv: f64,
    pub c_s: f64,
    pub kappa: f64,
    pub dt: f64,
    pub symbol: SpatialSymbol,
}

impl WaveParams {
    pub fn new(u_adv: f64, c_s: f64, kappa: f64, dt: f64) -> Self {
        Self { u_adv, c_s, kappa, dt, symbol: SpatialSymbol::Exact }
    }

    fn validate(&self) -> Result<(), DispersionError> {
        if !(self.c_s >= 0.0 && self.u_adv >= 0.0) {
            return Err(DispersionError::InvalidParams("need c_s >= 0 and U >= 0"));
        }
        if !(self.kappa >= 0.0 && self.dt > 0.0) {
            return Err(DispersionError::InvalidParams("need kappa >= 0 and dt > 0"));
        }
        Ok(())
    }

    /// The value standing in for `iκ`.
    pub fn ikappa(&self) -> Result<Complex64, DispersionError> {
        Ok(match self.symbol {
            SpatialSymbol::Exact => I * self.kappa,
            SpatialSymbol::CenteredFd { order, dx } => {
                Stencil1D::centered(order)?.symbol(self.kappa * dx) / dx
            }
        })
    }

    /// Implicit acoustic part and explicit advective part of the tendency.
    pub fn split_matrices(&self) -> Result<(CMatrix, CMatrix), DispersionError> {
        let s = self.ikappa()?;
        let fast = CMatrix::from_rows(&[&[0.0 * s, -self.c_s * s], &[-self.c_s * s, 0.0 * s]]);
        let slow = CMatrix::diag(&[-self.u_adv * s, -self.u_adv * s]);
        Ok((fast, slow))
    }

    /// Continuous frequencies `(U + c)κ` and `(U - c)κ`.
    pub fn exact_omegas(&self) -> [f64; 2] {
        [(self.u_adv + self.c_s) * self.kappa, (self.u_adv - self.c_s) * self.kappa]
    }
}

/// Update matrix of one fwsw-SDC step built from the Kronecker form of the
/// sweep: `U^{k+1} = L⁻¹R U^k + L⁻¹(1 ⊗ u0)`, then the quadrature end update.
pub fn build_update_matrix(p: &WaveParams, rule: &QuadratureRule, sweeps: usize) -> Result<CMatrix, DispersionError> {
    Ok(&CMatrix::identity(2) + &sdc_increment(p, rule, sweeps)?)
}

/// `Z - I` for fwsw-SDC, formed without the cancellation of subtracting I.
pub fn sdc_increment(p: &WaveParams, rule: &QuadratureRule, sweeps: usize) -> Result<CMatrix, DispersionError> {
    p.validate()?;
    if sweeps == 0 {
        return Err(DispersionError::InvalidParams("at least one sweep is required"));
    }
    let (fast, slow) = p.split_matrices()?;
    let full = &fast + &slow;
    let m = rule.num_nodes();
    let dt = Complex64::new(p.dt, 0.0);
    let imex = &rule.q_fast_matrix().kron(&fast) + &rule.q_slow_matrix().kron(&slow);
    let imex = imex.scale(dt);
    let l = &CMatrix::identity(2 * m) - &imex;
    let r = &rule.q_matrix().kron(&full).scale(dt) - &imex;
    let l_inv = l.inverse()?;
    let e = &l_inv * &r;
    let end = CMatrix::from_fn(1, m, |_, j| Complex64::new(rule.q_end[j], 0.0)).kron(&full).scale(dt);

    let mut y = CMatrix::zeros(2, 2);
    for col in 0..2 {
        let mut u0 = [Complex64::new(0.0, 0.0); 2];
        u0[col] = ONE;
        let spread: Vec<Complex64> = (0..m).flat_map(|_| u0).collect();
        let base = l_inv.matvec(&spread);
        let mut stages = spread;
        for _ in 0..sweeps {
            stages = e.matvec(&stages);
            for (s, b) in stages.iter_mut().zip(&base) {
                *s += b;
            }
        }
        let inc = end.matvec(&stages);
        for row in 0..2 {
            y[(row, col)] = inc[row];
        }
    }
    Ok(y)
}

/// Implicit midpoint: `(I - Δt/2 A)⁻¹(I + Δt/2 A)`.
pub fn midpoint_update_matrix(p: &WaveParams) -> Result<CMatrix, DispersionError> {
    Ok(&CMatrix::identity(2) + &midpoint_increment(p)?)
}

/// `Z - I = (I - Δt/2 A)⁻¹ Δt A` for implicit midpoint.
fn midpoint_increment(p: &WaveParams) -> Result<CMatrix, DispersionError> {
    p.validate()?;
    let (fast, slow) = p.split_matrices()?;
    let a = (&fast + &slow).scale(Complex64::new(p.dt, 0.0));
    let lhs = &CMatrix::identity(2) - &a.scale(Complex64::new(0.5, 0.0));
    Ok(&lhs.inverse()? * &a)
}

/// Roots `z` of `z² - tr(Z) z + det(Z) = 0`.
pub fn characteristic_roots(z: &CMatrix) -> Result<[Complex64; 2], DispersionError> {
    check_two_by_two(z)?;
    let tr = z[(0, 0)] + z[(1, 1)];
    let det = z[(0, 0)] * z[(1, 1)] - z[(0, 1)] * z[(1, 0)];
    Ok(quadratic_roots(tr, det))
}

fn check_two_by_two(z: &CMatrix) -> Result<(), DispersionError> {
    if z.rows() != 2 || z.cols() != 2 {
        return Err(DispersionError::NotTwoByTwo(z.rows(), z.cols()));
    }
    Ok(())
}

/// Eigenvalues of a 2×2 increment matrix `Y = Z - I`.
fn increment_roots(y: &CMatrix) -> Result<[Complex64; 2], DispersionError> {
    check_two_by_two(y)?;
    let tr = y[(0, 0)] + y[(1, 1)];
    let det = y[(0, 0)] * y[(1, 1)] - y[(0, 1)] * y[(1, 0)];
    Ok(quadratic_roots(tr, det))
}

fn quadratic_roots(tr: Complex64, det: Complex64) -> [Complex64; 2] {
    let disc = (tr * tr - 4.0 * det).sqrt();
    // avoid cancellation: take the larger root first, the other from the product
    let big = if (tr + disc).norm() >= (tr - disc).norm() {
        (tr + disc) * 0.5
    } else {
        (tr - disc) * 0.5
    };
    if big.norm() == 0.0 {
        return [big, big];
    }
    [big, det / big]
}

/// `ω = i log(z)/Δt`; `z = 0` maps to an imaginary part of −∞.
pub fn omega_from_root(z: Complex64, dt: f64) -> Complex64 {
    omega_from_increment(z - ONE, dt)
}

/// `ω = i log(1 + y)/Δt`, accurate for small `y`.
pub fn omega_from_increment(y: Complex64, dt: f64) -> Complex64 {
    let z = ONE + y;
    if z.norm() == 0.0 {
        return Complex64::new(0.0, f64::NEG_INFINITY);
    }
    let log_mod = 0.5 * (2.0 * y.re + y.norm_sqr()).ln_1p();
    let arg = y.im.atan2(1.0 + y.re);
    I * Complex64::new(log_mod, arg) / dt
}

pub fn solve_dispersion(z: &CMatrix, dt: f64) -> Result<[Complex64; 2], DispersionError> {
    check_two_by_two(z)?;
    let y = z - &CMatrix::identity(2);
    Ok(increment_roots(&y)?.map(|r| omega_from_increment(r, dt)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum DispersionScheme {
    FwswSdc { rule: QuadratureRule, sweeps: usize },
    Midpoint,
    Bdf2,
}

impl DispersionScheme {
    /// Per-step growth factors minus one for the two branches at one wavenumber.
    fn increments(&self, p: &WaveParams) -> Result<[Complex64; 2], DispersionError> {
        match self {
            DispersionScheme::FwswSdc { rule, sweeps } => increment_roots(&sdc_increment(p, rule, *sweeps)?),
            DispersionScheme::Midpoint => increment_roots(&midpoint_increment(p)?),
            DispersionScheme::Bdf2 => {
                p.validate()?;
                let s = p.ikappa()?;
                // eigenvalues of the full operator are -(U ± c) s; the physical root of
                // (3/2 - Δtμ) z² - 2z + 1/2 = 0 is z = (2 + √(1+2Δtμ))/(3 - 2Δtμ),
                // the one tending to 1 as Δtμ → 0
                Ok([p.u_adv + p.c_s, p.u_adv - p.c_s].map(|speed| {
                    let mu = -speed * s * p.dt;
                    let root = (ONE + 2.0 * mu).sqrt();
                    (2.0 * mu / (root + 1.0) + 2.0 * mu) / (3.0 - 2.0 * mu)
                }))
            }
        }
    }
}

/// Frequencies of both branches over a sorted wavenumber grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionCurve {
    pub dt: f64,
    pub kappas: Vec<f64>,
    /// Branch 0 continues `(U + c)κ`, branch 1 continues `(U - c)κ`.
    pub omega: [Vec<Complex64>; 2],
    /// Per-step growth factor `z` of each branch.
    pub roots: [Vec<Complex64>; 2],
    /// Indices where the principal logarithm wrapped around ±π.
    pub wrapped: Vec<usize>,
    /// Indices where the two roots coincided to 1e-12.
    pub ambiguous: Vec<usize>,
}

impl DispersionCurve {
    pub fn phase_speed(&self, branch: usize, i: usize) -> f64 {
        self.omega[branch][i].re / self.kappas[i]
    }

    /// Per-step amplitude `|z| = exp(Im(ω)Δt)`.
    pub fn amplification(&self, branch: usize, i: usize) -> f64 {
        self.roots[branch][i].norm()
    }

    /// `exp(Im(ω))`, the Δt-free convention.
    pub fn amplification_unit_time(&self, branch: usize, i: usize) -> f64 {
        self.omega[branch][i].im.exp()
    }

    /// Largest relative phase-speed error over both branches and indices `range`.
    pub fn max_phase_error(&self, base: &WaveParams, range: std::ops::Range<usize>) -> f64 {
        let exact = [base.u_adv + base.c_s, base.u_adv - base.c_s];
        range
            .flat_map(|i| (0..2).map(move |b| (b, i)))
            .map(|(b, i)| ((self.phase_speed(b, i) - exact[b]) / exact[b]).abs())
            .fold(0.0, f64::max)
    }
}

/// Evaluate `scheme` on every κ and assign roots to branches by continuity.
pub fn sweep_curve(
    base: &WaveParams,
    kappas: &[f64],
    scheme: &DispersionScheme,
) -> Result<DispersionCurve, DispersionError> {
    if !(base.c_s > base.u_adv) {
        return Err(DispersionError::InvalidParams("branch tracking needs c_s > U"));
    }
    if kappas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DispersionError::InvalidParams("wavenumbers must be strictly increasing"));
    }
    let raw: Vec<[Complex64; 2]> = kappas
        .par_iter()
        .map(|&kappa| scheme.increments(&WaveParams { kappa, ..*base }))
        .collect::<Result<_, _>>()?;

    let dt = base.dt;
    let mut omega = [Vec::with_capacity(kappas.len()), Vec::with_capacity(kappas.len())];
    let mut roots = [Vec::with_capacity(kappas.len()), Vec::with_capacity(kappas.len())];
    let mut wrapped = Vec::new();
    let mut ambiguous = Vec::new();
    let first = WaveParams { kappa: kappas.first().copied().unwrap_or(0.0), ..*base }.exact_omegas();
    let mut prev = [Complex64::new(first[0], 0.0), Complex64::new(first[1], 0.0)];
    for (i, pair) in raw.iter().enumerate() {
        let w = pair.map(|y| omega_from_increment(y, dt));
        if (pair[0] - pair[1]).norm() < 1e-12 {
            ambiguous.push(i);
        }
        let keep = (w[0] - prev[0]).norm() + (w[1] - prev[1]).norm();
        let swap = (w[1] - prev[0]).norm() + (w[0] - prev[1]).norm();
        let order = if swap < keep { [1, 0] } else { [0, 1] };
        let is_wrapped = order.iter().enumerate().any(|(b, &k)| {
            let jump = (w[k].re - prev[b].re).abs() * dt;
            (w[k].re * dt).abs() > PI - 1e-9 || (i > 0 && jump > 0.5 * PI)
        });
        if is_wrapped {
            wrapped.push(i);
        }
        for (b, &k) in order.iter().enumerate() {
            omega[b].push(w[k]);
            roots[b].push(ONE + pair[k]);
            prev[b] = w[k];
        }
    }
    Ok(DispersionCurve { dt, kappas: kappas.to_vec(), omega, roots, wrapped, ambiguous })
}
