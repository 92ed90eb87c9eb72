use clap::{Args, Parser, Subcommand};
use fwsw::experiments::MultiscaleScheme;
use fwsw::sdc::UpdateMode;
use fwsw::NodeFamily;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "fwsw", version, about = "Fast-wave slow-wave SDC experiments")]
pub struct Cli {
    /// TOML file with one table per experiment; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// CSV destination; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// JSON metrics destination; stderr when omitted.
    #[arg(long, global = true)]
    pub metrics: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Number of quadrature nodes.
    #[arg(long = "M")]
    pub nodes: Option<usize>,
    /// Number of sweeps.
    #[arg(long = "K")]
    pub sweeps: Option<usize>,
    #[arg(long)]
    pub family: Option<NodeFamily>,
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Solver {
    #[arg(long = "update-mode")]
    pub update_mode: Option<UpdateMode>,
    /// Relative GMRES tolerance, also the floor of the adaptive inner tolerance.
    #[arg(long = "gmres-tol")]
    pub gmres_tol: Option<f64>,
    #[arg(long = "gmres-restart")]
    pub gmres_restart: Option<usize>,
    /// Factor on the SDC residual in the adaptive inner tolerance.
    #[arg(long = "tol-factor")]
    pub tol_factor: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quadrature nodes and end-update weights.
    Nodes {
        #[command(flatten)]
        common: Common,
    },
    /// |R| of the scalar test problem on a grid of Δtλ values.
    Stability {
        #[command(flatten)]
        common: Common,
        #[arg(long = "slow-max")]
        slow_max: Option<f64>,
        #[arg(long = "fast-max")]
        fast_max: Option<f64>,
        /// Samples per axis.
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Spectral radius and norm of the error propagation matrix per node count.
    StiffLimit {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M-max")]
        max_nodes: Option<usize>,
    },
    /// Discrete dispersion relation of the acoustic-advection system.
    Dispersion {
        #[command(flatten)]
        common: Common,
        #[arg(long = "U")]
        u_adv: Option<f64>,
        #[arg(long)]
        cs: Option<f64>,
        /// sdc, midpoint or bdf2.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Error against the exact acoustic-advection solution for a series of step counts.
    Converge {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: Solver,
    },
    /// Residual reduction per sweep within one step.
    ResidualRates {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: Solver,
    },
    /// Multi-scale acoustic-advection run.
    Multiscale {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: Solver,
        /// sdc, midpoint, bdf2 or sdc-M-K; repeatable. `sdc` uses --M and --K.
        #[arg(long)]
        scheme: Vec<String>,
    },
    /// Gravity waves in a channel with solver accounting.
    Boussinesq {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: Solver,
        /// Half-resolution 150×15 grid.
        #[arg(long)]
        smoke: bool,
        /// Also integrate a fine reference and report the error.
        #[arg(long)]
        reference: bool,
        #[arg(long = "t-end")]
        t_end: Option<f64>,
    },
}

pub fn parse_multiscale_schemes(
    names: &[String],
    common: &Common,
) -> Result<Vec<MultiscaleScheme>, fwsw::ExperimentError> {
    names
        .iter()
        .map(|name| match name.as_str() {
            "sdc" => Ok(MultiscaleScheme::Sdc { nodes: common.nodes.unwrap_or(2), sweeps: common.sweeps.unwrap_or(2) }),
            other => other.parse(),
        })
        .collect()
}
