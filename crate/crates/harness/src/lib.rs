//! Configuration, seeded parallel experiments, the invariant suite and
//! file output for the `critgraph` engine.

pub mod checks;
pub mod config;
pub mod experiment;
pub mod output;
pub mod runner;

use std::path::PathBuf;

use critgraph::dist::DistError;
use critgraph::limit::LimitError;
use critgraph::oracle::OracleError;
use critgraph::stats::StatsError;
use critgraph::walk::WalkError;
use thiserror::Error;

pub use checks::{run_invariant_suite, CheckOutcome, SuiteConfig, SuiteReport};
pub use config::{load_config, parse_config, ConfigError, ExperimentConfig, Mode};
pub use experiment::{run_convergence_experiment, ExperimentReport, Run};
pub use output::{emit_outputs, Table};
pub use runner::Runner;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("dist: {0}")]
    Dist(#[from] DistError),
    #[error("walk: {0}")]
    Walk(#[from] WalkError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("limit: {0}")]
    Limit(#[from] LimitError),
    #[error("stats: {0}")]
    Stats(#[from] StatsError),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0} exists; pass --force to overwrite")]
    Exists(PathBuf),
    #[error("interrupted")]
    Interrupted,
}

/// Run one mode of an experiment configuration.
pub fn run_mode(
    cfg: &ExperimentConfig,
    runner: &Runner,
) -> Result<Run<ExperimentReport>, HarnessError> {
    match cfg.mode {
        Mode::Census => experiment::run_census(cfg, runner),
        Mode::Path => experiment::run_paths(cfg, runner),
        Mode::Limit => experiment::run_limit(cfg, runner),
        Mode::Compare => run_convergence_experiment(cfg, runner),
        Mode::Invariants => unreachable!("the invariant suite has its own report"),
    }
}
