//! Batch experiments behind the command-line driver. Each returns a [`Table`]
//! for CSV output and, where useful, a serialisable metrics record.

mod acoustic_runs;
mod analysis;
mod boussinesq_run;

pub use acoustic_runs::{
    packet_centroid, periodic_centroid, run_converge, run_multiscale, run_residual_rates, ConvergeConfig, ConvergeReport, MultiscaleConfig,
    MultiscaleMetrics, MultiscaleReport, MultiscaleScheme, ResidualRatesConfig, ResidualRatesReport, ResidualSeries,
};
pub use analysis::{
    dispersion_table, nodes_table, stability_table, stiff_limit_table, DispersionConfig, StabilityConfig,
    StiffLimitConfig, StiffLimitRow,
};
pub use boussinesq_run::{run_boussinesq, BoussinesqMetrics, BoussinesqReport, BoussinesqRunConfig};

use crate::dispersion::DispersionError;
use crate::problems::io::fmt_f64;
use crate::problems::ProblemError;
use crate::quadrature::QuadratureError;
use crate::scalar::ScalarError;
use crate::sdc::{SdcError, SolveError};
use std::io::{self, Write};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Dispersion(#[from] DispersionError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Sdc(#[from] SdcError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl ExperimentError {
    /// Whether the failure came from a linear solver rather than from the input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, ExperimentError::Solve(_) | ExperimentError::Sdc(SdcError::ImplicitSolve { .. }))
    }
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Flag(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Real(v) => f.write_str(&fmt_f64(*v)),
            Cell::Text(s) => f.write_str(s),
            Cell::Flag(b) => f.write_str(if *b { "1" } else { "0" }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).map(|(a, b)| (a.ln(), b.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [8.0, 16.0, 32.0, 64.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-4.0)).collect();
        assert!((loglog_slope(&x, &y) + 4.0).abs() < 1e-12);
    }

    #[test]
    fn table_csv() {
        let mut t = Table::new(&["k", "value", "ok"]);
        t.push(vec![3usize.into(), 0.5.into(), true.into()]);
        assert_eq!(t.to_csv_string(), "k,value,ok\n3,5.00000000000000e-1,1\n");
        assert_eq!(t.column("ok"), Some(2));
    }
}
