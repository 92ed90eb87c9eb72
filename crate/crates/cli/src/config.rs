//! Declarative experiment configuration: defaults, then the TOML file, then flags.

use crate::cli::{Common, Solver};
use anyhow::Context;
use fwsw::experiments::{
    BoussinesqRunConfig, ConvergeConfig, DispersionConfig, MultiscaleConfig, ResidualRatesConfig, StabilityConfig,
    StiffLimitConfig,
};
use fwsw::{GmresConfig, NodeFamily};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default)]
pub struct NodesConfig {
    pub family: NodeFamily,
    pub nodes: usize,
}

impl Default for NodesConfig {
    fn default() -> Self {
        Self { family: NodeFamily::GaussRadauRight, nodes: 3 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub nodes: NodesConfig,
    pub stability: StabilityConfig,
    pub stiff_limit: StiffLimitConfig,
    pub dispersion: DispersionConfig,
    pub converge: ConvergeConfig,
    pub residual_rates: ResidualRatesConfig,
    pub multiscale: MultiscaleConfig,
    pub boussinesq: BoussinesqRunConfig,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

pub fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

pub fn apply_gmres(gmres: &mut GmresConfig, solver: &Solver) {
    set(&mut gmres.tolerance, solver.gmres_tol);
    set(&mut gmres.restart, solver.gmres_restart);
}

pub fn apply_common_family(family: &mut NodeFamily, nodes: &mut usize, common: &Common) {
    set(family, common.family);
    set(nodes, common.nodes);
}
