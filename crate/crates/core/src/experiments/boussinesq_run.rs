//! Gravity-wave channel run with solver accounting.

use super::{ExperimentError, Table};
use crate::linalg::{norm2, GmresConfig};
use crate::problems::{buoyancy_cross_section, gravity_wave_initial_data, Boussinesq, BoussinesqParams, Field, GravityWaveBubble};
use crate::quadrature::{make_rule, NodeFamily};
use crate::sdc::{step, SdcConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoussinesqRunConfig {
    pub params: BoussinesqParams,
    pub bubble: GravityWaveBubble,
    pub t_end: f64,
    pub dt: f64,
    pub family: NodeFamily,
    pub nodes: usize,
    pub sweeps: usize,
    pub gmres: GmresConfig,
    pub tol_factor: f64,
    /// Height of the buoyancy cross-section.
    pub cross_section_z: f64,
    /// Also integrate a reference with `nodes`/`reference_sweeps` at Δt/`reference_refinement`.
    pub reference: bool,
    pub reference_refinement: usize,
    pub reference_sweeps: usize,
    pub reference_gmres: GmresConfig,
}

impl Default for BoussinesqRunConfig {
    fn default() -> Self {
        Self {
            params: BoussinesqParams::default(),
            bubble: GravityWaveBubble::default(),
            t_end: 3000.0,
            dt: 30.0,
            family: NodeFamily::GaussRadauRight,
            nodes: 3,
            sweeps: 4,
            gmres: GmresConfig::default(),
            tol_factor: 0.1,
            cross_section_z: 5000.0,
            reference: false,
            reference_refinement: 10,
            reference_sweeps: 5,
            reference_gmres: GmresConfig { tolerance: 1e-10, restart: 50, max_iters: 100_000 },
        }
    }
}

impl BoussinesqRunConfig {
    pub fn steps(&self) -> Result<usize, ExperimentError> {
        let n = self.t_end / self.dt;
        if !(self.dt > 0.0) || (n - n.round()).abs() > 1e-9 * n.max(1.0) || n.round() < 1.0 {
            return Err(ExperimentError::InvalidConfig("T must be a positive multiple of Δt".into()));
        }
        Ok(n.round() as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoussinesqMetrics {
    pub steps: usize,
    pub nodes: usize,
    pub sweeps: usize,
    pub solves: usize,
    /// `steps × M × K` (Radau nodes all need a solve).
    pub expected_solves: usize,
    pub gmres_total: usize,
    pub avg_per_call: f64,
    /// Mean GMRES iterations per solve in each sweep, over the whole run.
    pub per_sweep_mean: Vec<f64>,
    /// Horizontal, vertical and advective CFL numbers.
    pub cfl: (f64, f64, f64),
    pub max_abs_buoyancy: f64,
    /// Relative 2-norm distance to the reference, if one was computed.
    pub error: Option<f64>,
    pub unstable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoussinesqReport {
    #[serde(skip)]
    pub table: Table,
    #[serde(skip)]
    pub state: Vec<f64>,
    pub metrics: BoussinesqMetrics,
}

struct Run {
    state: Vec<f64>,
    solves: usize,
    per_sweep: Vec<(usize, usize)>,
    unstable: bool,
}

fn integrate(
    sys: &Boussinesq,
    u0: &[f64],
    sdc: &SdcConfig,
    dt: f64,
    steps: usize,
    blowup: f64,
) -> Result<Run, ExperimentError> {
    let m = sdc.rule.num_nodes();
    let mut u = u0.to_vec();
    let mut solves = 0;
    let mut per_sweep = vec![(0usize, 0usize); sdc.sweeps];
    for _ in 0..steps {
        let out = step(&u, sys, sdc, dt)?;
        solves += out.implicit_solves;
        for (k, &it) in out.sweep_iterations.iter().enumerate() {
            per_sweep[k].0 += it;
            per_sweep[k].1 += m;
        }
        u = out.u_next;
        if !u.iter().all(|v| v.is_finite() && v.abs() <= blowup) {
            return Ok(Run { state: u, solves, per_sweep, unstable: true });
        }
    }
    Ok(Run { state: u, solves, per_sweep, unstable: false })
}

pub fn run_boussinesq(cfg: &BoussinesqRunConfig) -> Result<BoussinesqReport, ExperimentError> {
    let steps = cfg.steps()?;
    let sys = Boussinesq::new(cfg.params)?.with_gmres(cfg.gmres);
    let u0 = gravity_wave_initial_data(&sys, &cfg.bubble);
    let rule = make_rule(cfg.family, cfg.nodes, 0.0, cfg.dt)?;
    let sdc = SdcConfig::new(rule, cfg.sweeps).with_inner_tolerance(cfg.tol_factor, cfg.gmres.tolerance);
    // velocities stay far below this for any stable run
    let blowup = 1e3 * cfg.params.c_s.max(1.0);
    let run = integrate(&sys, &u0, &sdc, cfg.dt, steps, blowup)?;

    let error = if cfg.reference && !run.unstable {
        let fine = cfg.dt / cfg.reference_refinement.max(1) as f64;
        let ref_sys = Boussinesq::new(cfg.params)?.with_gmres(cfg.reference_gmres);
        let ref_sdc = SdcConfig::new(make_rule(cfg.family, cfg.nodes, 0.0, fine)?, cfg.reference_sweeps)
            .with_inner_tolerance(cfg.tol_factor, cfg.reference_gmres.tolerance);
        let reference = integrate(&ref_sys, &u0, &ref_sdc, fine, steps * cfg.reference_refinement.max(1), blowup)?;
        let diff: Vec<f64> = run.state.iter().zip(&reference.state).map(|(a, b)| a - b).collect();
        Some(norm2(&diff) / norm2(&reference.state))
    } else {
        None
    };

    let gmres_total: usize = run.per_sweep.iter().map(|p| p.0).sum();
    let per_sweep_mean = run.per_sweep.iter().map(|&(it, n)| if n == 0 { 0.0 } else { it as f64 / n as f64 }).collect();
    let section = buoyancy_cross_section(&sys, &run.state, cfg.cross_section_z);
    let mut table = Table::new(&["x", "z", "b"]);
    for (x, b) in cfg.params.x().iter().zip(&section) {
        table.push(vec![(*x).into(), cfg.cross_section_z.into(), (*b).into()]);
    }
    let metrics = BoussinesqMetrics {
        steps,
        nodes: cfg.nodes,
        sweeps: cfg.sweeps,
        solves: run.solves,
        expected_solves: steps * cfg.nodes * cfg.sweeps,
        gmres_total,
        avg_per_call: if run.solves == 0 { 0.0 } else { gmres_total as f64 / run.solves as f64 },
        per_sweep_mean,
        cfl: cfg.params.cfl(cfg.dt),
        max_abs_buoyancy: sys.field(&run.state, Field::B).iter().fold(0.0, |m, v| m.max(v.abs())),
        error,
        unstable: run.unstable,
    };
    Ok(BoussinesqReport { table, state: run.state, metrics })
}
