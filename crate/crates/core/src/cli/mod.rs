//! Command-line front end: `run`, `figure` and `validate`.
//!
//! Exit codes: 0 success, 2 usage, 3 file access, 4 config schema,
//! 5 integrator non-convergence, 6 failed validation, 7 anything else.

pub mod config;
pub mod output;
pub mod validate;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::dynamics::{DynamicsError, IntegratorSettings};
use crate::experiments::{figure, run, sweep, CurveData, ExperimentError, FigureName, SweepRow};
use config::{ConfigDocument, Job};
use output::ResultRow;
use validate::{run_checks, ValidateOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("config error: {0}")]
    Schema(String),
    #[error("{0}")]
    Convergence(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Schema(_) => 4,
            CliError::Convergence(_) => 5,
            CliError::Validation(_) => 6,
            CliError::Other(_) => 7,
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Dynamics(d @ DynamicsError::NotConverged { .. }) => CliError::Convergence(d.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dapsim", version, about = "Atoms crossing a lossy cavity: conditional dynamics, fidelities and success rates")]
pub struct Cli {
    /// Worker threads for sweeps (default: one per core)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Base integrator step, overriding config files and presets
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the scenario or sweep described by a TOML config
    Run { config: PathBuf },
    /// Recompute the data behind one figure (fig3 .. fig7)
    Figure {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Analytic-vs-numeric self checks
    Validate {
        /// Shift applied to the closed-form eigenvalue under test
        #[arg(long, hide = true, default_value_t = 0.0)]
        eigenvalue_perturbation: f64,
    },
}

fn failed_rows(rows: &[SweepRow]) -> Vec<String> {
    rows.iter()
        .filter_map(|r| r.outcome.as_ref().err().map(|e| format!("{} = {}: {e}", r.parameter.name(), r.value)))
        .collect()
}

fn report_failures(failures: Vec<String>) -> Result<(), CliError> {
    if failures.is_empty() {
        return Ok(());
    }
    for f in &failures {
        eprintln!("row failed: {f}");
    }
    Err(CliError::Other(format!("{} sweep row(s) failed", failures.len())))
}

fn print_row(r: &ResultRow) {
    let s = &r.summary;
    let param = r.param_value.map(|v| format!("{} = {v}: ", r.param_name)).unwrap_or_default();
    println!(
        "{param}F = {:.6}, P0 = {:.6}, T = {:.6}, dt = {:.3e}, converged = {}",
        s.fidelity, s.p0, s.duration, s.dt_used, s.converged
    );
}

pub fn cmd_run(config_path: &Path, dt: Option<f64>) -> Result<(), CliError> {
    let doc = ConfigDocument::load(config_path)?;
    let plan = doc.output();
    match doc.job(dt)? {
        Job::Single(spec) => {
            for w in spec.warnings() {
                eprintln!("warning: {w}");
            }
            let result = run(&spec)?;
            let row = ResultRow::single(result.summary());
            output::write_results(&plan.summary, std::slice::from_ref(&row))?;
            if let Some(path) = &plan.timeseries {
                output::write_time_series(path, &result.time_series()?, plan.stride)?;
            }
            print_row(&row);
            Ok(())
        }
        Job::Sweep(s) => {
            for w in s.template.warnings() {
                eprintln!("warning: {w}");
            }
            let rows = sweep(&s)?;
            let table: Vec<ResultRow> = rows.iter().map(ResultRow::from).collect();
            output::write_results(&plan.summary, &table)?;
            table.iter().for_each(print_row);
            report_failures(failed_rows(&rows))
        }
    }
}

pub fn cmd_figure(name: &str, out: &Path, dt: Option<f64>) -> Result<(), CliError> {
    let name: FigureName = name.parse().map_err(|e: ExperimentError| CliError::Usage(e.to_string()))?;
    let settings = dt.map_or_else(IntegratorSettings::default, |dt| IntegratorSettings::default().with_dt(dt));
    let curves = figure(name, settings)?;
    let mut failures = Vec::new();
    for c in &curves {
        let path = output::write_curve(out, c)?;
        println!("wrote {}", path.display());
        if let CurveData::Sweep(rows) = &c.data {
            failures.extend(failed_rows(rows).into_iter().map(|f| format!("{}: {f}", c.stem)));
        }
    }
    report_failures(failures)
}

pub fn cmd_validate(opts: &ValidateOptions) -> Result<(), CliError> {
    let checks = run_checks(opts);
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("failed checks: {}", failed.join(", "))))
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Some(dt) = cli.dt {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(CliError::Usage(format!("--dt must be positive, got {dt}")));
        }
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Other(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Run { config } => cmd_run(config, cli.dt),
        Command::Figure { name, out } => cmd_figure(name, out, cli.dt),
        Command::Validate { eigenvalue_perturbation } => {
            let settings = cli.dt.map_or_else(IntegratorSettings::default, |dt| IntegratorSettings::default().with_dt(dt));
            cmd_validate(&ValidateOptions { settings, eigenvalue_perturbation: *eigenvalue_perturbation })
        }
    })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let codes: Vec<i32> = [
            CliError::Usage(String::new()),
            CliError::Io(String::new()),
            CliError::Schema(String::new()),
            CliError::Convergence(String::new()),
            CliError::Validation(String::new()),
            CliError::Other(String::new()),
        ]
        .iter()
        .map(CliError::exit_code)
        .collect();
        let mut sorted = codes.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), codes.len());
        assert!(!codes.contains(&0));
    }

    #[test]
    fn non_convergence_maps_to_its_code() {
        let e: CliError = ExperimentError::Dynamics(DynamicsError::NotConverged { residual: 1e-3, dt: 0.1, tolerance: 1e-8 }).into();
        assert_eq!(e.exit_code(), 5);
        assert!(e.to_string().contains("residual"));
    }

    #[test]
    fn parse_and_dispatch_errors() {
        assert_eq!(main_with_args(["dapsim", "run", "/nonexistent/config.toml"]), 3);
        assert_eq!(main_with_args(["dapsim", "figure", "fig9"]), 2);
        assert_eq!(main_with_args(["dapsim", "bogus"]), 2);
        assert_eq!(main_with_args(["dapsim", "--dt", "-1", "validate"]), 2);
    }
}
