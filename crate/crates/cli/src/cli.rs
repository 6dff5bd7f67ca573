//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::compute::{compute, write_results};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::filter::{filter, write_intervals};
use crate::simulate::{simulate, SimConfig};
use crate::suitability_io::suitability_report;
use crate::trajectories::{read_trajectories, write_trajectories};

#[derive(Debug, Parser)]
#[command(name = "criticality", version, about = "Criticality metrics for traffic recordings")]
pub struct Args {
    /// Overrides the seed of the run configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluates the configured metrics on every recording.
    Compute {
        /// Run configuration (TOML)
        config: PathBuf,
        /// Trajectory table (CSV)
        data: PathBuf,
        /// Result table (CSV)
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Finds the intervals in which a metric reaches its target value.
    Filter {
        /// Run configuration (TOML); metrics with a `target` are used
        config: PathBuf,
        /// Trajectory table (CSV)
        data: PathBuf,
        /// Interval table (CSV)
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Selects suitable metrics for a set of requirements.
    Suitability {
        /// Metric property records (TOML)
        knowledge_base: PathBuf,
        /// Requirements and their order (TOML)
        requirements: PathBuf,
        /// Report file; stdout if omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Writes the predicted trajectories of a set of actors.
    Simulate {
        /// Prediction model and initial actor states (TOML)
        model_config: PathBuf,
        /// Trajectory table (CSV)
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<RunConfig> {
    let mut config = RunConfig::load(path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    Ok(config)
}

fn write_file(path: &Path, f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    std::fs::write(path, buf).map_err(|e| CliError::io(path, e))
}

fn execute(args: Args) -> Result<()> {
    match args.command {
        Command::Compute { config, data, output } => {
            let config = load_config(&config, args.seed)?;
            let recordings = read_trajectories(&data)?;
            let rows = compute(&config, &recordings)?;
            write_file(&output, |b| write_results(b, &rows))
        }
        Command::Filter { config, data, output } => {
            let config = load_config(&config, args.seed)?;
            let recordings = read_trajectories(&data)?;
            let report = filter(&config, &recordings)?;
            if report.failed_evaluations > 0 {
                eprintln!("warning: {} metric evaluations failed and were skipped", report.failed_evaluations);
            }
            write_file(&output, |b| write_intervals(b, &report.intervals))
        }
        Command::Suitability { knowledge_base, requirements, output } => {
            let report = suitability_report(&knowledge_base, &requirements)?;
            match output {
                Some(path) => std::fs::write(&path, report).map_err(|e| CliError::io(&path, e)),
                None => std::io::stdout().write_all(report.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
            }
        }
        Command::Simulate { model_config, output } => {
            let config = SimConfig::load(&model_config)?;
            let recording = simulate(&config)?;
            write_file(&output, |b| write_trajectories(b, std::slice::from_ref(&recording)))
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match args.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| execute(args)),
            Err(e) => Err(CliError::Usage(format!("thread pool: {e}"))),
        },
        None => execute(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
