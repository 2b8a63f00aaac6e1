//! Command-line front end for the `ringwalk` library: parses an experiment
//! configuration, runs one subcommand on a worker pool and writes a CSV table.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use commands::{run, Subcommand};
pub use config::{ExperimentConfig, GridSpec, RawConfig};
pub use error::{CliError, ConfigError, ConfigErrorKind};
pub use table::{Cell, ResultTable, TableError};

#[derive(Debug, Parser)]
#[command(name = "ringwalk", version, about = "Monitored chiral quantum walk experiments on a ring")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Subcommand,
    /// Flat `key = value` file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Chiral phase in radians
    #[arg(long, allow_hyphen_values = true, conflicts_with = "phi_over_pin")]
    pub phi: Option<String>,
    /// Chiral phase as phi*N/pi, in [-1, 1]
    #[arg(long, allow_hyphen_values = true)]
    pub phi_over_pin: Option<String>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub total_time: Option<String>,
    /// LO:HI:COUNT
    #[arg(long, allow_hyphen_values = true)]
    pub phi_grid: Option<String>,
    /// LO:HI:COUNT
    #[arg(long)]
    pub tau_grid: Option<String>,
    /// LO:HI:COUNT, for unitary-baseline
    #[arg(long)]
    pub time_grid: Option<String>,
    /// Comma-separated ring sizes, for size-budget
    #[arg(long)]
    pub n_list: Option<String>,
    /// Comma-separated budgets, for size-budget
    #[arg(long)]
    pub t_list: Option<String>,
    /// Largest winding number, for dark-count
    #[arg(long)]
    pub k_max: Option<String>,
    #[arg(long)]
    pub tol_degenerate: Option<String>,
    #[arg(long)]
    pub tol_unit: Option<String>,
    /// Output path; stdout when absent
    #[arg(long)]
    pub out: Option<String>,
    /// Worker threads; defaults to the number of cores
    #[arg(long)]
    pub workers: Option<String>,
}

impl Cli {
    fn flags(&self) -> Vec<(&'static str, &String)> {
        let pairs: [(&'static str, &Option<String>); 16] = [
            ("n", &self.n),
            ("delta", &self.delta),
            ("phi", &self.phi),
            ("phi_over_pin", &self.phi_over_pin),
            ("tau", &self.tau),
            ("total_time", &self.total_time),
            ("phi_grid", &self.phi_grid),
            ("tau_grid", &self.tau_grid),
            ("time_grid", &self.time_grid),
            ("n_list", &self.n_list),
            ("t_list", &self.t_list),
            ("k_max", &self.k_max),
            ("tol_degenerate", &self.tol_degenerate),
            ("tol_unit", &self.tol_unit),
            ("out", &self.out),
            ("workers", &self.workers),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k, v))).collect()
    }

    pub fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::from_file(p)?,
            None => RawConfig::default(),
        };
        for (k, v) in self.flags() {
            raw.set_flag(k, v)?;
        }
        ExperimentConfig::resolve(&raw)
    }
}

/// Provenance lines: tool version, subcommand, timestamp, resolved config.
pub fn provenance(cmd: Subcommand, cfg: &ExperimentConfig, timestamp: &str) -> Vec<String> {
    let mut h = vec![
        format!("ringwalk {}", env!("CARGO_PKG_VERSION")),
        format!("subcommand: {}", cmd.name()),
        format!("generated: {timestamp}"),
    ];
    h.extend(cfg.echo().into_iter().map(|l| format!("config: {l}")));
    h
}

/// Run `cmd` on a pool of `workers` threads (all cores when `None`).
pub fn run_with_workers(cmd: Subcommand, cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let workers = cfg
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Output(format!("cannot start worker pool: {e}")))?;
    let mut table = pool.install(|| run(cmd, cfg))?;
    let mut header = provenance(cmd, cfg, &chrono::Utc::now().to_rfc3339());
    header.append(&mut table.header);
    table.header = header;
    Ok(table)
}

/// Whole program minus process exit: parse `args`, run, write the table to
/// `--out` or `stdout`.
pub fn execute<I, A>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // help and version
            write!(stdout, "{e}").map_err(|e| CliError::Output(e.to_string()))?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let cfg = cli.resolve()?;
    let table = run_with_workers(cli.command, &cfg)?;
    match &cfg.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CliError::Output(format!("cannot create {}: {e}", path.display())))?;
            table.write_to(&mut f).map_err(|e| CliError::Output(e.to_string()))
        }
        None => table.write_to(stdout).map_err(|e| CliError::Output(e.to_string())),
    }
}
