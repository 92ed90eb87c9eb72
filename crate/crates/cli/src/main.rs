mod cli;
mod config;

use anyhow::Context;
use clap::Parser;
use cli::{parse_multiscale_schemes, Cli, Command};
use config::{apply_common_family, apply_gmres, set, FileConfig};
use fwsw::experiments::{
    dispersion_table, nodes_table, run_boussinesq, run_converge, run_multiscale, run_residual_rates, stability_table,
    stiff_limit_table,
};
use fwsw::{BoussinesqParams, ExperimentError, Table};
use serde::Serialize;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

const EXIT_INSTABILITY: u8 = 2;
const EXIT_SOLVER: u8 = 3;

/// What an experiment produced.
struct Output {
    table: Table,
    metrics: Option<serde_json::Value>,
    unstable: bool,
}

fn output(table: Table, metrics: Option<impl Serialize>, unstable: bool) -> anyhow::Result<Output> {
    let metrics = metrics.map(serde_json::to_value).transpose()?;
    Ok(Output { table, metrics, unstable })
}

fn run(cli: &Cli, file: FileConfig) -> Result<Output, ExperimentError> {
    let none: Option<()> = None;
    let wrap = |r: anyhow::Result<Output>| r.map_err(|e| ExperimentError::InvalidConfig(e.to_string()));
    match &cli.command {
        Command::Nodes { common } => {
            let mut cfg = file.nodes;
            apply_common_family(&mut cfg.family, &mut cfg.nodes, common);
            wrap(output(nodes_table(cfg.family, cfg.nodes)?, none, false))
        }
        Command::Stability { common, slow_max, fast_max, resolution } => {
            let mut cfg = file.stability;
            apply_common_family(&mut cfg.family, &mut cfg.nodes, common);
            set(&mut cfg.sweeps, common.sweeps);
            set(&mut cfg.slow_range.1, *slow_max);
            set(&mut cfg.fast_range.1, *fast_max);
            if let Some(n) = resolution {
                cfg.resolution = (*n, *n);
            }
            wrap(output(stability_table(&cfg)?, none, false))
        }
        Command::StiffLimit { common, max_nodes } => {
            let mut cfg = file.stiff_limit;
            set(&mut cfg.family, common.family);
            set(&mut cfg.max_nodes, *max_nodes);
            set(&mut cfg.dt, common.dt);
            let (table, rows) = stiff_limit_table(&cfg)?;
            wrap(output(table, Some(rows), false))
        }
        Command::Dispersion { common, u_adv, cs, scheme, samples } => {
            let mut cfg = file.dispersion;
            apply_common_family(&mut cfg.family, &mut cfg.nodes, common);
            set(&mut cfg.sweeps, common.sweeps);
            set(&mut cfg.dt, common.dt);
            set(&mut cfg.u_adv, *u_adv);
            set(&mut cfg.c_s, *cs);
            set(&mut cfg.samples, *samples);
            if let Some(s) = scheme {
                cfg.scheme = s.clone();
            }
            wrap(output(dispersion_table(&cfg)?, none, false))
        }
        Command::Converge { common, solver } => {
            let mut cfg = file.converge;
            apply_common_family(&mut cfg.family, &mut cfg.nodes, common);
            if let Some(k) = common.sweeps {
                cfg.sweeps = vec![k];
            }
            set(&mut cfg.update_mode, solver.update_mode);
            set(&mut cfg.tol_factor, solver.tol_factor);
            apply_gmres(&mut cfg.gmres, solver);
            let report = run_converge(&cfg)?;
            let unstable = report.unstable;
            wrap(output(report.table.clone(), Some(&report), unstable))
        }
        Command::ResidualRates { common, solver } => {
            let mut cfg = file.residual_rates;
            apply_common_family(&mut cfg.family, &mut cfg.nodes, common);
            set(&mut cfg.sweeps, common.sweeps);
            set(&mut cfg.dt, common.dt);
            set(&mut cfg.tol_factor, solver.tol_factor);
            apply_gmres(&mut cfg.gmres, solver);
            let report = run_residual_rates(&cfg)?;
            wrap(output(report.table.clone(), Some(&report), false))
        }
        Command::Multiscale { common, solver, scheme } => {
            let mut cfg = file.multiscale;
            set(&mut cfg.family, common.family);
            set(&mut cfg.tol_factor, solver.tol_factor);
            apply_gmres(&mut cfg.gmres, solver);
            if !scheme.is_empty() {
                cfg.schemes = parse_multiscale_schemes(scheme, common)?;
            }
            if let Some(dt) = common.dt {
                cfg.steps = (cfg.t_end / dt).round() as usize;
            }
            let report = run_multiscale(&cfg)?;
            wrap(output(report.table.clone(), Some(&report), false))
        }
        Command::Boussinesq { common, solver, smoke, reference, t_end } => {
            let mut cfg = file.boussinesq;
            if *smoke {
                cfg.params = BoussinesqParams { nx: 150, nz: 15, ..cfg.params };
            }
            apply_common_family(&mut cfg.family, &mut cfg.nodes, common);
            set(&mut cfg.sweeps, common.sweeps);
            set(&mut cfg.dt, common.dt);
            set(&mut cfg.t_end, *t_end);
            set(&mut cfg.tol_factor, solver.tol_factor);
            apply_gmres(&mut cfg.gmres, solver);
            cfg.reference |= *reference;
            let report = run_boussinesq(&cfg)?;
            let unstable = report.metrics.unstable;
            wrap(output(report.table.clone(), Some(&report), unstable))
        }
    }
}

fn write_to(path: Option<&Path>, text: &str, fallback: &mut dyn Write) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => fallback.write_all(text.as_bytes()).context("writing output"),
    }
}

fn main() -> ExitCode {
    // clap's own usage-error code (2) would collide with the instability code
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    let file = match FileConfig::load(cli.config.as_deref()) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    let out = match run(&cli, file) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_solver_failure() { ExitCode::from(EXIT_SOLVER) } else { ExitCode::FAILURE };
        }
    };
    let written = write_to(cli.out.as_deref(), &out.table.to_csv_string(), &mut std::io::stdout()).and_then(|_| {
        match &out.metrics {
            Some(m) => {
                let text = serde_json::to_string_pretty(m)? + "\n";
                write_to(cli.metrics.as_deref(), &text, &mut std::io::stderr())
            }
            None => Ok(()),
        }
    });
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    if out.unstable {
        eprintln!("instability detected");
        return ExitCode::from(EXIT_INSTABILITY);
    }
    ExitCode::SUCCESS
}
