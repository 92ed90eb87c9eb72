//! Periodic 1-D acoustic-advection system on `[0, 1)`:
//! `u_t + U u_x + c p_x = 0`, `p_t + U p_x + c u_x = 0`.
//!
//! State layout is `[u_0..u_{N-1}, p_0..p_{N-1}]`. Acoustic coupling uses a
//! sixth-order centered stencil and is treated implicitly; advection uses a
//! fifth-order upwind stencil and is treated explicitly.

use super::stencil::Stencil1D;
use crate::linalg::{gmres_solve, FnOperator, GmresConfig};
use crate::sdc::{ImplicitSolve, LinearSplitSystem, SolveError, SplitSystem};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("grid of {points} points is narrower than the stencil ({needed})")]
    GridTooSmall { points: usize, needed: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

#[derive(Debug, Clone)]
pub struct AcousticAdvection {
    n: usize,
    dx: f64,
    pub u_adv: f64,
    pub c_s: f64,
    centered: Stencil1D,
    upwind: Stencil1D,
    pub gmres: GmresConfig,
}

impl AcousticAdvection {
    pub fn new(n: usize, u_adv: f64, c_s: f64) -> Result<Self, ProblemError> {
        if !(c_s >= 0.0 && u_adv.is_finite()) {
            return Err(ProblemError::InvalidParameter("need c_s >= 0 and finite U"));
        }
        let centered = Stencil1D::centered(6).expect("sixth-order centered stencil exists");
        let upwind = Stencil1D::upwind(5, u_adv).expect("fifth-order upwind stencil exists");
        let needed = 2 * centered.reach().max(upwind.reach()) + 1;
        if n < needed {
            return Err(ProblemError::GridTooSmall { points: n, needed });
        }
        Ok(Self {
            n,
            dx: 1.0 / n as f64,
            u_adv,
            c_s,
            centered,
            upwind,
            gmres: GmresConfig { restart: 50, ..GmresConfig::default() },
        })
    }

    pub fn with_gmres(mut self, gmres: GmresConfig) -> Self {
        self.gmres = gmres;
        self
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.n).map(|i| i as f64 * self.dx).collect()
    }

    /// Pack separate `u` and `p` samples into the state layout.
    pub fn pack(u: &[f64], p: &[f64]) -> Vec<f64> {
        u.iter().chain(p).copied().collect()
    }

    pub fn unpack(state: &[f64]) -> (&[f64], &[f64]) {
        state.split_at(state.len() / 2)
    }

    fn apply_fast(&self, x: &[f64], out: &mut [f64]) {
        let (u, p) = x.split_at(self.n);
        let (du, dp) = out.split_at_mut(self.n);
        du.fill(0.0);
        dp.fill(0.0);
        self.centered.apply_periodic(p, self.dx, -self.c_s, du);
        self.centered.apply_periodic(u, self.dx, -self.c_s, dp);
    }
}

impl SplitSystem<f64> for AcousticAdvection {
    fn dimension(&self) -> usize {
        2 * self.n
    }

    fn eval_fast(&self, u: &[f64], out: &mut [f64]) {
        self.apply_fast(u, out);
    }

    fn eval_slow(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let (u, p) = x.split_at(self.n);
        let (du, dp) = out.split_at_mut(self.n);
        self.upwind.apply_periodic(u, self.dx, -self.u_adv, du);
        self.upwind.apply_periodic(p, self.dx, -self.u_adv, dp);
    }

    fn solve_implicit(
        &self,
        alpha: f64,
        rhs: &[f64],
        guess: &[f64],
        tol: f64,
    ) -> Result<ImplicitSolve<f64>, SolveError> {
        if alpha == 0.0 {
            return Ok(ImplicitSolve { solution: rhs.to_vec(), iterations: 0 });
        }
        let op = FnOperator::new(2 * self.n, |x: &[f64], y: &mut [f64]| {
            self.apply_fast(x, y);
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi = xi - alpha * *yi;
            }
        });
        let out = gmres_solve(&op, rhs, guess, &self.gmres.with_tolerance(tol))?;
        Ok(ImplicitSolve { solution: out.solution, iterations: out.iterations })
    }
}

impl LinearSplitSystem<f64> for AcousticAdvection {}

/// Initial pressure profiles for the convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize, Default)]
pub enum PressureProfile {
    /// `sin(2πx) + sin(6πx)`, smooth and 1-periodic.
    #[default]
    #[serde(rename = "sin2-sin6")]
    SinTwoSix,
    /// `sin(2πx) + sin(5πx)`, which has a kink when wrapped onto `[0, 1)`.
    #[serde(rename = "sin2-sin5")]
    SinTwoFive,
}

impl PressureProfile {
    pub fn eval(self, x: f64) -> f64 {
        let x = x.rem_euclid(1.0);
        match self {
            PressureProfile::SinTwoSix => (2.0 * PI * x).sin() + (6.0 * PI * x).sin(),
            PressureProfile::SinTwoFive => (2.0 * PI * x).sin() + (5.0 * PI * x).sin(),
        }
    }
}

impl std::str::FromStr for PressureProfile {
    type Err = ProblemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sin2-sin6" => Ok(PressureProfile::SinTwoSix),
            "sin2-sin5" => Ok(PressureProfile::SinTwoFive),
            _ => Err(ProblemError::InvalidParameter("unknown pressure profile")),
        }
    }
}

/// Exact solution for `u(x, 0) = 0`, `p(x, 0) = p0(x)` on the periodic unit interval.
pub fn exact_acoustic_advection(
    p0: impl Fn(f64) -> f64,
    x: &[f64],
    u_adv: f64,
    c_s: f64,
    t: f64,
) -> (Vec<f64>, Vec<f64>) {
    let right = |xi: f64| p0((xi - (u_adv + c_s) * t).rem_euclid(1.0));
    let left = |xi: f64| p0((xi - (u_adv - c_s) * t).rem_euclid(1.0));
    let u = x.iter().map(|&xi| 0.5 * right(xi) - 0.5 * left(xi)).collect();
    let p = x.iter().map(|&xi| 0.5 * right(xi) + 0.5 * left(xi)).collect();
    (u, p)
}

pub const MULTISCALE_SIGMA: f64 = 0.1;
pub const MULTISCALE_SLOW_CENTER: f64 = 0.75;
pub const MULTISCALE_FAST_CENTER: f64 = 0.25;
pub const MULTISCALE_WAVENUMBER: f64 = 7.2 * PI;

/// Signed periodic distance `x - center` folded into `[-1/2, 1/2)`.
pub fn periodic_offset(x: f64, center: f64) -> f64 {
    (x - center + 0.5).rem_euclid(1.0) - 0.5
}

/// Broad Gaussian `exp(-x²/σ²)` centered at `center`.
pub fn slow_packet(x: f64, center: f64) -> f64 {
    let d = periodic_offset(x, center);
    (-(d * d) / (MULTISCALE_SIGMA * MULTISCALE_SIGMA)).exp()
}

/// Gaussian modulated by `cos(k x / σ)`.
pub fn fast_packet(x: f64, center: f64) -> f64 {
    let d = periodic_offset(x, center);
    slow_packet(x, center) * (MULTISCALE_WAVENUMBER * d / MULTISCALE_SIGMA).cos()
}

/// Which parts of the multi-scale initial data to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiscalePart {
    Both,
    SlowOnly,
    FastOnly,
}

/// Rightward-travelling data `u = p = p0(x - 0.75) + p1(x - 0.25)`, packed.
pub fn multiscale_initial_data(n: usize, part: MultiscalePart) -> Vec<f64> {
    let p: Vec<f64> = (0..n)
        .map(|i| {
            let x = i as f64 / n as f64;
            let slow = slow_packet(x, MULTISCALE_SLOW_CENTER);
            let fast = fast_packet(x, MULTISCALE_FAST_CENTER);
            match part {
                MultiscalePart::Both => slow + fast,
                MultiscalePart::SlowOnly => slow,
                MultiscalePart::FastOnly => fast,
            }
        })
        .collect();
    AcousticAdvection::pack(&p, &p)
}
