//! `tdsts`: evaluate, sample, sweep and validate thermalized displaced
//! squeezed thermal states.
//!
//! Exit codes: 0 on success, 1 when validation fails or output cannot be
//! written, 2 on an invalid configuration or command line.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tdsts::validate::{run_suite, Case, SuiteConfig, Tag};
use tdsts::Execution;

use commands::DensityKind;
use config::{ConfigError, RunConfig, FOCK_CUTOFF_ENV};

#[derive(Parser)]
#[command(name = "tdsts", version, about = "Closed-form thermalized displaced squeezed thermal states")]
struct Cli {
    /// Run every data-parallel loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moments, uncertainty, entropy and quadrature variances on the time grid.
    Evaluate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Densities, the two-mode wavefunction or the density matrix on a grid.
    Density {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        kind: DensityKind,
    },
    /// Checks every closed form against the numerical oracles.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        draws: Option<usize>,
        /// Perturbs one closed form to exercise the failure path.
        #[arg(long, hide = true)]
        corrupt: Option<Tag>,
    },
    /// Evaluate rows for each value of one parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
}

const INVALID: u8 = 2;

fn config_failure(e: ConfigError) -> ExitCode {
    eprintln!("error: invalid configuration: {e}");
    ExitCode::from(INVALID)
}

fn write_table(cfg: &RunConfig, table: &output::Table) -> ExitCode {
    let text = table.render(cfg.output.format);
    match output::emit(&text, cfg.output.path.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::FAILURE
        }
    }
}

fn suite_config(
    config: Option<PathBuf>,
    seed: Option<u64>,
    draws: Option<usize>,
    corrupt: Option<Tag>,
    execution: Execution,
) -> Result<SuiteConfig, ConfigError> {
    let mut suite = SuiteConfig { execution, corrupt, ..SuiteConfig::default() };
    if let Some(path) = config {
        let cfg = RunConfig::load(&path)?;
        let source = path.display().to_string();
        let invalid = |message| ConfigError { source: source.clone(), message };
        suite.osc = cfg.osc().map_err(invalid)?;
        suite.fock_cutoff = cfg.oracle.fock_cutoff;
        suite.quad_points = cfg.oracle.quad_points;
        let spec = cfg.spec().map_err(invalid)?;
        suite.fixed = cfg.time_grid.times().into_iter().map(|t| Case { spec: spec.clone(), t }).collect();
    } else if let Ok(raw) = std::env::var(FOCK_CUTOFF_ENV) {
        suite.fock_cutoff = raw.trim().parse().map_err(|_| ConfigError {
            source: FOCK_CUTOFF_ENV.into(),
            message: format!("expected an integer cutoff, got {raw:?}"),
        })?;
    }
    if let Some(seed) = seed {
        suite.seed = seed;
    }
    if let Some(draws) = draws {
        suite.draws = draws;
    }
    Ok(suite)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };

    match cli.command {
        Command::Evaluate { config } => {
            let cfg = match RunConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return config_failure(e),
            };
            match commands::evaluate(&cfg, exec) {
                Ok(table) => write_table(&cfg, &table),
                Err(e) => config_failure(e),
            }
        }
        Command::Density { config, kind } => {
            let cfg = match RunConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return config_failure(e),
            };
            match commands::density(&cfg, kind, exec) {
                Ok(table) => write_table(&cfg, &table),
                Err(e) => config_failure(e),
            }
        }
        Command::Sweep { config, axis, values } => {
            let cfg = match RunConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return config_failure(e),
            };
            let table = commands::parse_values(&values).and_then(|v| commands::sweep(&cfg, &axis, &v, exec));
            match table {
                Ok(table) => write_table(&cfg, &table),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(INVALID)
                }
            }
        }
        Command::Validate { config, seed, draws, corrupt } => {
            let suite = match suite_config(config, seed, draws, corrupt, exec) {
                Ok(s) => s,
                Err(e) => return config_failure(e),
            };
            let report = match run_suite(&suite) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(INVALID);
                }
            };
            print!("{}", commands::format_report(&report));
            if report.passed() {
                println!("all checks passed");
                ExitCode::SUCCESS
            } else {
                let tags: Vec<&str> = report.failing_tags().into_iter().map(Tag::name).collect();
                let slow: Vec<String> =
                    report.criteria.iter().filter(|c| !c.within_time()).map(|c| c.id.to_string()).collect();
                if !tags.is_empty() {
                    println!("failing tags: {}", tags.join(", "));
                }
                if !slow.is_empty() {
                    println!("over time: criterion {}", slow.join(", "));
                }
                ExitCode::FAILURE
            }
        }
    }
}
