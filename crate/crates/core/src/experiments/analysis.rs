//! Tables that need no time stepping: nodes, stability grids, stiff limits
//! and dispersion curves.

use super::{Cell, ExperimentError, Table};
use crate::dispersion::{sweep_curve, DispersionScheme, WaveParams};
use crate::quadrature::{make_rule, NodeFamily};
use crate::scalar::{error_matrix_size, scan_stability, ErrorMatrixSize};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Nodes on `[0, 1]` with their end-update weights.
pub fn nodes_table(family: NodeFamily, m: usize) -> Result<Table, ExperimentError> {
    let rule = make_rule(family, m, 0.0, 1.0)?;
    let lebesgue = rule.lebesgue_constant();
    let mut t = Table::new(&["family", "M", "index", "node", "weight", "lebesgue"]);
    for (j, (&x, &w)) in rule.nodes.iter().zip(&rule.q_end).enumerate() {
        t.push(vec![family.to_string().into(), m.into(), (j + 1).into(), x.into(), w.into(), lebesgue.into()]);
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StabilityConfig {
    pub family: NodeFamily,
    pub nodes: usize,
    pub sweeps: usize,
    pub slow_range: (f64, f64),
    pub fast_range: (f64, f64),
    pub resolution: (usize, usize),
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            family: NodeFamily::GaussRadauRight,
            nodes: 3,
            sweeps: 4,
            slow_range: (0.0, 5.0),
            fast_range: (0.0, 12.0),
            resolution: (400, 400),
        }
    }
}

/// `|R|` on the Δtλ rectangle, slow axis outermost.
pub fn stability_table(cfg: &StabilityConfig) -> Result<Table, ExperimentError> {
    let rule = make_rule(cfg.family, cfg.nodes, 0.0, 1.0)?;
    let grid = scan_stability(&rule, cfg.sweeps, cfg.slow_range, cfg.fast_range, cfg.resolution)?;
    let mut t = Table::new(&["dt_lambda_slow", "dt_lambda_fast", "abs_R", "masked"]);
    for (i, &ls) in grid.axis_slow.iter().enumerate() {
        for (j, &lf) in grid.axis_fast.iter().enumerate() {
            let idx = i * grid.axis_fast.len() + j;
            t.push(vec![ls.into(), lf.into(), grid.modulus[idx].into(), grid.masked[idx].into()]);
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StiffLimitConfig {
    pub family: NodeFamily,
    pub max_nodes: usize,
    /// Finite fast frequencies compared against the stiff limit.
    pub lambda_fast: Vec<f64>,
    pub lambda_slow: f64,
    pub dt: f64,
}

impl Default for StiffLimitConfig {
    fn default() -> Self {
        Self {
            family: NodeFamily::GaussRadauRight,
            max_nodes: 14,
            lambda_fast: vec![50.0, 100.0],
            lambda_slow: 1.0,
            dt: 1.0,
        }
    }
}

/// Error propagation matrix sizes for one node count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StiffLimitRow {
    pub nodes: usize,
    pub stiff: ErrorMatrixSize,
    /// One entry per configured finite λ_fast.
    pub finite: Vec<ErrorMatrixSize>,
}

pub fn stiff_limit_table(cfg: &StiffLimitConfig) -> Result<(Table, Vec<StiffLimitRow>), ExperimentError> {
    let lowest = if cfg.family == NodeFamily::GaussLobatto { 2 } else { 1 };
    if cfg.max_nodes < lowest {
        return Err(ExperimentError::InvalidConfig(format!("max_nodes must be at least {lowest}")));
    }
    let mut header = vec!["M".to_string(), "rho_inf".to_string(), "norm_inf".to_string()];
    for lf in &cfg.lambda_fast {
        header.push(format!("rho_{lf}"));
        header.push(format!("norm_{lf}"));
    }
    let mut t = Table { header, rows: Vec::new() };
    let mut rows = Vec::new();
    for m in lowest..=cfg.max_nodes {
        let rule = make_rule(cfg.family, m, 0.0, 1.0)?;
        let stiff = error_matrix_size(&rule, None, cfg.lambda_slow, cfg.dt)?;
        let finite = cfg
            .lambda_fast
            .iter()
            .map(|&lf| error_matrix_size(&rule, Some(lf), cfg.lambda_slow, cfg.dt))
            .collect::<Result<Vec<_>, _>>()?;
        let mut cells: Vec<Cell> = vec![m.into(), stiff.spectral_radius.into(), stiff.inf_norm.into()];
        for s in &finite {
            cells.push(s.spectral_radius.into());
            cells.push(s.inf_norm.into());
        }
        t.push(cells);
        rows.push(StiffLimitRow { nodes: m, stiff, finite });
    }
    Ok((t, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DispersionConfig {
    pub u_adv: f64,
    pub c_s: f64,
    pub dt: f64,
    pub family: NodeFamily,
    pub nodes: usize,
    pub sweeps: usize,
    /// `sdc`, `midpoint` or `bdf2`.
    pub scheme: String,
    /// Largest κΔt sampled.
    pub max_kappa_dt: f64,
    pub samples: usize,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self {
            u_adv: 0.05,
            c_s: 1.0,
            dt: 1.0,
            family: NodeFamily::GaussRadauRight,
            nodes: 3,
            sweeps: 3,
            scheme: "sdc".to_string(),
            max_kappa_dt: PI,
            samples: 256,
        }
    }
}

impl DispersionConfig {
    pub fn scheme(&self) -> Result<DispersionScheme, ExperimentError> {
        match self.scheme.as_str() {
            "sdc" => Ok(DispersionScheme::FwswSdc {
                rule: make_rule(self.family, self.nodes, 0.0, 1.0)?,
                sweeps: self.sweeps,
            }),
            "midpoint" => Ok(DispersionScheme::Midpoint),
            "bdf2" => Ok(DispersionScheme::Bdf2),
            other => Err(ExperimentError::InvalidConfig(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Both branches per wavenumber. `amplification` is `|z|` per step and
/// `amplification_unit_time` is `exp(Im ω)`.
pub fn dispersion_table(cfg: &DispersionConfig) -> Result<Table, ExperimentError> {
    if cfg.samples < 2 || !(cfg.max_kappa_dt > 0.0) || !(cfg.dt > 0.0) {
        return Err(ExperimentError::InvalidConfig("need samples >= 2 and positive κΔt range and Δt".into()));
    }
    let scheme = cfg.scheme()?;
    let kappas: Vec<f64> =
        (1..=cfg.samples).map(|i| cfg.max_kappa_dt * i as f64 / (cfg.samples as f64 * cfg.dt)).collect();
    let base = WaveParams::new(cfg.u_adv, cfg.c_s, 0.0, cfg.dt);
    let curve = sweep_curve(&base, &kappas, &scheme)?;
    let mut t = Table::new(&[
        "kappa",
        "branch",
        "re_omega",
        "im_omega",
        "phase_speed",
        "amplification",
        "amplification_unit_time",
        "wrapped",
    ]);
    for (i, &kappa) in kappas.iter().enumerate() {
        let wrapped = curve.wrapped.contains(&i);
        for b in 0..2 {
            let w = curve.omega[b][i];
            t.push(vec![
                kappa.into(),
                b.into(),
                w.re.into(),
                w.im.into(),
                curve.phase_speed(b, i).into(),
                curve.amplification(b, i).into(),
                curve.amplification_unit_time(b, i).into(),
                wrapped.into(),
            ]);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_weights_sum_to_one() {
        let t = nodes_table(NodeFamily::GaussLobatto, 4).unwrap();
        let w = t.column("weight").unwrap();
        let sum: f64 = t.rows.iter().map(|r| if let Cell::Real(v) = r[w] { v } else { 0.0 }).sum();
        assert!((sum - 1.0).abs() < 1e-14);
        assert_eq!(t.rows.len(), 4);
    }

    #[test]
    fn stiff_limit_table_shape() {
        let cfg = StiffLimitConfig { max_nodes: 4, ..Default::default() };
        let (t, rows) = stiff_limit_table(&cfg).unwrap();
        assert_eq!(t.header.len(), 7);
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.stiff.spectral_radius < 1.0));
    }

    #[test]
    fn stability_masking() {
        let cfg = StabilityConfig { resolution: (3, 3), slow_range: (0.0, 2.0), fast_range: (0.0, 2.0), ..Default::default() };
        let t = stability_table(&cfg).unwrap();
        assert_eq!(t.rows.len(), 9);
        // slow = 2, fast = 0 lies below the diagonal
        assert_eq!(t.rows[6][3], Cell::Flag(true));
        assert_eq!(t.rows[0][3], Cell::Flag(false));
    }

    #[test]
    fn dispersion_rows_per_branch() {
        let cfg = DispersionConfig { samples: 16, ..Default::default() };
        let t = dispersion_table(&cfg).unwrap();
        assert_eq!(t.rows.len(), 32);
        assert!(DispersionConfig { scheme: "rk4".into(), ..cfg }.scheme().is_err());
    }
}
