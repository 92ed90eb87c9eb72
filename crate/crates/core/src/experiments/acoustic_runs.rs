//! Time-stepping experiments on the periodic acoustic-advection problem.

use super::{loglog_slope, ExperimentError, Table};
use crate::linalg::{norm2, norm_inf, GmresConfig};
use crate::problems::acoustic::{periodic_offset, slow_packet, MULTISCALE_SLOW_CENTER};
use crate::problems::{exact_acoustic_advection, multiscale_initial_data, AcousticAdvection, MultiscalePart, PressureProfile};
use crate::quadrature::{make_rule, NodeFamily};
use crate::reference::{LinearStepper, ReferenceScheme};
use crate::sdc::{step, SdcConfig, SweepState, UpdateMode};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative errors above this abort a convergence series.
const BLOWUP: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvergeConfig {
    pub u_adv: f64,
    pub c_s: f64,
    pub t_end: f64,
    /// Acoustic CFL number; fixes the grid for each step count.
    pub c_fast: f64,
    pub steps: Vec<usize>,
    pub sweeps: Vec<usize>,
    pub family: NodeFamily,
    pub nodes: usize,
    pub update_mode: UpdateMode,
    pub profile: PressureProfile,
    pub gmres: GmresConfig,
    pub tol_factor: f64,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self {
            u_adv: 0.1,
            c_s: 1.0,
            t_end: 1.0,
            c_fast: 5.0,
            steps: vec![8, 16, 32, 64],
            sweeps: vec![3, 4, 5],
            family: NodeFamily::GaussRadauRight,
            nodes: 3,
            update_mode: UpdateMode::QuadratureUpdate,
            profile: PressureProfile::SinTwoSix,
            gmres: GmresConfig { tolerance: 1e-13, restart: 50, max_iters: 10_000 },
            tol_factor: 1e-3,
        }
    }
}

impl ConvergeConfig {
    fn validate(&self) -> Result<(), ExperimentError> {
        if self.steps.len() < 2 || self.steps.contains(&0) {
            return Err(ExperimentError::InvalidConfig("need at least two positive step counts".into()));
        }
        if self.sweeps.is_empty() || !(self.c_s > 0.0 && self.c_fast > 0.0 && self.t_end > 0.0) {
            return Err(ExperimentError::InvalidConfig("need sweeps and positive c_s, C_fast, T".into()));
        }
        Ok(())
    }

    /// Grid points for `n` steps at the configured acoustic CFL number.
    pub fn points(&self, n: usize) -> usize {
        (self.c_fast * n as f64 / (self.c_s * self.t_end)).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergeReport {
    #[serde(skip)]
    pub table: Table,
    /// `(K, fitted order)` for every series that stayed stable.
    pub orders: Vec<(usize, f64)>,
    pub unstable: bool,
}

/// Relative max-norm error after integrating to `t_end` with each step count.
pub fn run_converge(cfg: &ConvergeConfig) -> Result<ConvergeReport, ExperimentError> {
    cfg.validate()?;
    let mut table = Table::new(&["K", "n_steps", "points", "dt", "error", "unstable"]);
    let mut orders = Vec::new();
    let mut unstable = false;
    for &k in &cfg.sweeps {
        let mut errors = Vec::new();
        let mut blew_up = false;
        for &n in &cfg.steps {
            let points = cfg.points(n);
            let dt = cfg.t_end / n as f64;
            let sys = AcousticAdvection::new(points, cfg.u_adv, cfg.c_s)?.with_gmres(cfg.gmres);
            let sdc = SdcConfig::new(make_rule(cfg.family, cfg.nodes, 0.0, dt)?, k)
                .with_update_mode(cfg.update_mode)
                .with_inner_tolerance(cfg.tol_factor, cfg.gmres.tolerance);
            let x = sys.grid();
            let p0: Vec<f64> = x.iter().map(|&xi| cfg.profile.eval(xi)).collect();
            let mut u = AcousticAdvection::pack(&vec![0.0; points], &p0);
            for _ in 0..n {
                u = step(&u, &sys, &sdc, dt)?.u_next;
            }
            let (ue, pe) = exact_acoustic_advection(|s| cfg.profile.eval(s), &x, cfg.u_adv, cfg.c_s, cfg.t_end);
            let exact = AcousticAdvection::pack(&ue, &pe);
            let diff: Vec<f64> = u.iter().zip(&exact).map(|(a, b)| a - b).collect();
            let err = norm_inf(&diff) / norm_inf(&exact);
            if !(err <= BLOWUP) {
                table.push(vec![k.into(), n.into(), points.into(), dt.into(), f64::NAN.into(), true.into()]);
                blew_up = true;
                break;
            }
            table.push(vec![k.into(), n.into(), points.into(), dt.into(), err.into(), false.into()]);
            errors.push(err);
        }
        if blew_up {
            unstable = true;
        } else {
            let n: Vec<f64> = cfg.steps.iter().map(|&s| s as f64).collect();
            orders.push((k, -loglog_slope(&n, &errors)));
        }
    }
    Ok(ConvergeReport { table, orders, unstable })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ResidualRatesConfig {
    pub dt: f64,
    pub points: usize,
    pub u_adv: f64,
    pub c_s: Vec<f64>,
    pub sweeps: usize,
    pub family: NodeFamily,
    pub nodes: usize,
    pub profile: PressureProfile,
    pub gmres: GmresConfig,
    pub tol_factor: f64,
}

impl Default for ResidualRatesConfig {
    fn default() -> Self {
        Self {
            dt: 0.025,
            points: 300,
            u_adv: 0.1,
            c_s: vec![0.5, 1.0, 1.5, 5.0],
            sweeps: 15,
            family: NodeFamily::GaussRadauRight,
            nodes: 3,
            profile: PressureProfile::SinTwoSix,
            gmres: GmresConfig { tolerance: 1e-14, restart: 50, max_iters: 10_000 },
            tol_factor: 1e-3,
        }
    }
}

/// Residuals of one single-step sweep sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSeries {
    pub c_s: f64,
    pub c_fast: f64,
    /// Residual before the first sweep, then after every sweep.
    pub residuals: Vec<f64>,
}

impl ResidualSeries {
    /// `r_k / r_{k-1}` for every sweep.
    pub fn ratios(&self) -> Vec<f64> {
        self.residuals.windows(2).map(|w| w[1] / w[0]).collect()
    }

    pub fn mean_ratio(&self) -> f64 {
        let r = self.ratios();
        r.iter().sum::<f64>() / r.len() as f64
    }

    /// Sweeps that reduced the residual.
    pub fn decreasing_sweeps(&self) -> usize {
        self.ratios().iter().filter(|&&r| r < 1.0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRatesReport {
    #[serde(skip)]
    pub table: Table,
    pub series: Vec<ResidualSeries>,
}

pub fn run_residual_rates(cfg: &ResidualRatesConfig) -> Result<ResidualRatesReport, ExperimentError> {
    if cfg.sweeps == 0 || cfg.c_s.iter().any(|&c| !(c >= 0.0)) || !(cfg.dt > 0.0) {
        return Err(ExperimentError::InvalidConfig("need sweeps >= 1, c_s >= 0 and Δt > 0".into()));
    }
    let mut table = Table::new(&["c_s", "c_fast", "sweep", "residual", "ratio"]);
    let mut series = Vec::new();
    for &c_s in &cfg.c_s {
        let sys = AcousticAdvection::new(cfg.points, cfg.u_adv, c_s)?.with_gmres(cfg.gmres);
        let sdc = SdcConfig::new(make_rule(cfg.family, cfg.nodes, 0.0, cfg.dt)?, cfg.sweeps)
            .with_inner_tolerance(cfg.tol_factor, cfg.gmres.tolerance);
        sdc.validate()?;
        let x = sys.grid();
        let p0: Vec<f64> = x.iter().map(|&xi| cfg.profile.eval(xi)).collect();
        let u0 = AcousticAdvection::pack(&vec![0.0; cfg.points], &p0);
        let mut state = SweepState::initialize(&u0, &sys, &sdc, cfg.dt)?;
        let mut residuals = vec![state.residual_norm];
        for _ in 0..cfg.sweeps {
            state.sweep(&sys, &sdc, cfg.dt)?;
            residuals.push(state.residual_norm);
        }
        let s = ResidualSeries { c_s, c_fast: c_s * cfg.dt / sys.dx(), residuals };
        for (k, ratio) in s.ratios().into_iter().enumerate() {
            table.push(vec![c_s.into(), s.c_fast.into(), (k + 1).into(), s.residuals[k + 1].into(), ratio.into()]);
        }
        series.push(s);
    }
    Ok(ResidualRatesReport { table, series })
}

/// Integrator used for a multi-scale run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MultiscaleScheme {
    Sdc { nodes: usize, sweeps: usize },
    Midpoint,
    Bdf2,
}

impl std::fmt::Display for MultiscaleScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MultiscaleScheme::Sdc { nodes, sweeps } => write!(f, "sdc-{nodes}-{sweeps}"),
            MultiscaleScheme::Midpoint => f.write_str("midpoint"),
            MultiscaleScheme::Bdf2 => f.write_str("bdf2"),
        }
    }
}

impl std::str::FromStr for MultiscaleScheme {
    type Err = ExperimentError;
    /// `sdc-M-K`, `midpoint` or `bdf2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "midpoint" => return Ok(MultiscaleScheme::Midpoint),
            "bdf2" => return Ok(MultiscaleScheme::Bdf2),
            _ => {}
        }
        let bad = || ExperimentError::InvalidConfig(format!("unknown scheme `{s}` (use sdc-M-K, midpoint or bdf2)"));
        let rest = s.strip_prefix("sdc-").ok_or_else(bad)?;
        let (m, k) = rest.split_once('-').ok_or_else(bad)?;
        Ok(MultiscaleScheme::Sdc { nodes: m.parse().map_err(|_| bad())?, sweeps: k.parse().map_err(|_| bad())? })
    }
}

impl TryFrom<String> for MultiscaleScheme {
    type Error = ExperimentError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<MultiscaleScheme> for String {
    fn from(s: MultiscaleScheme) -> Self {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MultiscaleConfig {
    pub points: usize,
    pub u_adv: f64,
    pub c_s: f64,
    pub t_end: f64,
    pub steps: usize,
    pub schemes: Vec<MultiscaleScheme>,
    pub family: NodeFamily,
    pub gmres: GmresConfig,
    pub tol_factor: f64,
}

impl Default for MultiscaleConfig {
    fn default() -> Self {
        Self {
            points: 512,
            u_adv: 0.05,
            c_s: 1.0,
            t_end: 3.0,
            steps: 154,
            schemes: vec![
                MultiscaleScheme::Sdc { nodes: 2, sweeps: 2 },
                MultiscaleScheme::Sdc { nodes: 3, sweeps: 4 },
                MultiscaleScheme::Midpoint,
                MultiscaleScheme::Bdf2,
            ],
            family: NodeFamily::GaussRadauRight,
            gmres: GmresConfig { tolerance: 1e-10, restart: 50, max_iters: 10_000 },
            tol_factor: 0.1,
        }
    }
}

/// Summary of the final state of one scheme.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiscaleMetrics {
    pub scheme: String,
    /// Largest `|p|` of the fast part relative to its initial value.
    pub fast_amplitude: f64,
    /// Largest `p` of the slow part relative to its initial value.
    pub slow_peak: f64,
    /// First moment `∫x p / ∫p` of the slow packet.
    pub slow_centroid: f64,
    pub slow_centroid_exact: f64,
    /// Grid point holding the slow packet's maximum.
    pub slow_peak_position: f64,
    /// `‖p‖₂` of the fast part relative to its initial value.
    pub fast_energy: f64,
    /// Distance travelled by the fast packet's centroid, tracked every step.
    pub fast_displacement: f64,
    pub fast_displacement_exact: f64,
    pub gmres_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiscaleReport {
    #[serde(skip)]
    pub table: Table,
    pub dx: f64,
    pub metrics: Vec<MultiscaleMetrics>,
}

/// Centre of mass of `p²` on the periodic unit interval, via the circular mean.
pub fn periodic_centroid(x: &[f64], p: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0, 0.0);
    for (&xi, &pi) in x.iter().zip(p) {
        let w = pi * pi;
        s += w * (2.0 * PI * xi).sin();
        c += w * (2.0 * PI * xi).cos();
    }
    (s.atan2(c) / (2.0 * PI)).rem_euclid(1.0)
}

/// First moment of a single-signed packet, taken over the half period
/// around its circular mean.
pub fn packet_centroid(x: &[f64], p: &[f64]) -> f64 {
    let guess = periodic_centroid(x, p);
    let (mut moment, mut mass) = (0.0, 0.0);
    for (&xi, &pi) in x.iter().zip(p) {
        let d = periodic_offset(xi, guess);
        if d.abs() < 0.4 {
            moment += d * pi;
            mass += pi;
        }
    }
    (guess + moment / mass).rem_euclid(1.0)
}

struct Trajectory {
    p: Vec<f64>,
    displacement: f64,
    iterations: usize,
}

fn integrate(
    cfg: &MultiscaleConfig,
    sys: &AcousticAdvection,
    scheme: MultiscaleScheme,
    part: MultiscalePart,
) -> Result<Trajectory, ExperimentError> {
    let dt = cfg.t_end / cfg.steps as f64;
    let x = sys.grid();
    let mut u = multiscale_initial_data(cfg.points, part);
    let mut centroid = periodic_centroid(&x, AcousticAdvection::unpack(&u).1);
    let mut displacement = 0.0;
    let mut iterations = 0;
    let mut stepper = match scheme {
        MultiscaleScheme::Midpoint => Some(LinearStepper::new(ReferenceScheme::Midpoint, dt, cfg.gmres)),
        MultiscaleScheme::Bdf2 => Some(LinearStepper::new(ReferenceScheme::Bdf2, dt, cfg.gmres)),
        MultiscaleScheme::Sdc { .. } => None,
    };
    let sdc = match scheme {
        MultiscaleScheme::Sdc { nodes, sweeps } => Some(
            SdcConfig::new(make_rule(cfg.family, nodes, 0.0, dt)?, sweeps)
                .with_inner_tolerance(cfg.tol_factor, cfg.gmres.tolerance),
        ),
        _ => None,
    };
    for _ in 0..cfg.steps {
        u = match (&mut stepper, &sdc) {
            (Some(st), _) => st.step(&u, sys)?,
            (None, Some(sdc)) => {
                let out = step(&u, sys, sdc, dt)?;
                iterations += out.inner_iterations;
                out.u_next
            }
            (None, None) => unreachable!("every scheme selects a stepper"),
        };
        let next = periodic_centroid(&x, AcousticAdvection::unpack(&u).1);
        displacement += periodic_offset(next, centroid);
        centroid = next;
    }
    if let Some(st) = stepper {
        iterations = st.total_iterations;
    }
    Ok(Trajectory { p: AcousticAdvection::unpack(&u).1.to_vec(), displacement, iterations })
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |best, i| if v[i] > v[best] { i } else { best })
}

/// Final pressure per scheme. The slow and fast packets are integrated
/// separately (the problem is linear) so each can be measured on its own.
pub fn run_multiscale(cfg: &MultiscaleConfig) -> Result<MultiscaleReport, ExperimentError> {
    if cfg.steps == 0 || cfg.schemes.is_empty() || !(cfg.t_end > 0.0) {
        return Err(ExperimentError::InvalidConfig("need steps, schemes and T > 0".into()));
    }
    let sys = AcousticAdvection::new(cfg.points, cfg.u_adv, cfg.c_s)?.with_gmres(cfg.gmres);
    let x = sys.grid();
    let speed = cfg.u_adv + cfg.c_s;
    let slow_exact_center = (MULTISCALE_SLOW_CENTER + speed * cfg.t_end).rem_euclid(1.0);
    let slow0 = multiscale_initial_data(cfg.points, MultiscalePart::SlowOnly);
    let fast0 = multiscale_initial_data(cfg.points, MultiscalePart::FastOnly);
    let slow_peak0 = norm_inf(AcousticAdvection::unpack(&slow0).1);
    let fast_peak0 = norm_inf(AcousticAdvection::unpack(&fast0).1);
    let fast_norm0 = norm2(AcousticAdvection::unpack(&fast0).1);

    let mut table = Table::new(&["scheme", "x", "p", "p_slow", "p_fast"]);
    let exact_slow: Vec<f64> =
        x.iter().map(|&xi| slow_packet(xi, slow_exact_center)).collect();
    for (xi, ps) in x.iter().zip(&exact_slow) {
        table.push(vec!["exact-slow".into(), (*xi).into(), (*ps).into(), (*ps).into(), 0.0.into()]);
    }
    let mut metrics = Vec::new();
    for &scheme in &cfg.schemes {
        let slow = integrate(cfg, &sys, scheme, MultiscalePart::SlowOnly)?;
        let fast = integrate(cfg, &sys, scheme, MultiscalePart::FastOnly)?;
        let label = scheme.to_string();
        for i in 0..cfg.points {
            table.push(vec![
                label.clone().into(),
                x[i].into(),
                (slow.p[i] + fast.p[i]).into(),
                slow.p[i].into(),
                fast.p[i].into(),
            ]);
        }
        metrics.push(MultiscaleMetrics {
            scheme: label,
            fast_amplitude: norm_inf(&fast.p) / fast_peak0,
            slow_peak: slow.p.iter().copied().fold(f64::NEG_INFINITY, f64::max) / slow_peak0,
            slow_centroid: packet_centroid(&x, &slow.p),
            slow_centroid_exact: slow_exact_center,
            slow_peak_position: x[argmax(&slow.p)],
            fast_energy: norm2(&fast.p) / fast_norm0,
            fast_displacement: fast.displacement,
            fast_displacement_exact: speed * cfg.t_end,
            gmres_iterations: slow.iterations + fast.iterations,
        });
    }
    Ok(MultiscaleReport { table, dx: sys.dx(), metrics })
}
