use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use critgraph_harness::checks::{run_invariant_suite, SuiteConfig};
use critgraph_harness::config::{load_config_unchecked, ExperimentConfig, Mode};
use critgraph_harness::output::emit_outputs;
use critgraph_harness::runner::{request_interrupt, Runner};
use critgraph_harness::{run_mode, HarnessError};

#[derive(Parser)]
#[command(
    name = "critgraph",
    version,
    about = "Critical inhomogeneous random graph experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long, global = true)]
    force: bool,
    /// Allow a non-critical pmf in compare mode.
    #[arg(long, global = true)]
    allow_noncritical: bool,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Component censuses of the walk at each n.
    Census,
    /// Mean rescaled walk, drift and quadratic-variation curves.
    Path,
    /// Excursion lengths of the reflected limit process.
    Limit,
    /// Graph side against limit side, with KS and l2 distances.
    Compare,
    /// The invariant suite; exits nonzero on any failure.
    Invariants,
}

impl Command {
    fn mode(self) -> Mode {
        match self {
            Command::Census => Mode::Census,
            Command::Path => Mode::Path,
            Command::Limit => Mode::Limit,
            Command::Compare => Mode::Compare,
            Command::Invariants => Mode::Invariants,
        }
    }
}

fn config(cli: &Cli) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &cli.config {
        Some(path) => load_config_unchecked(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.mode = cli.command.mode();
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    cfg.allow_noncritical |= cli.allow_noncritical;
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool, HarnessError> {
    let cfg = config(cli)?;
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let runner = Runner::new(workers)?;
    let (written, ok, complete) = if cfg.mode == Mode::Invariants {
        let run = run_invariant_suite(cfg.seed, &SuiteConfig::default(), &runner)?;
        for line in &run.log {
            eprintln!("{line}");
        }
        let ok = run.report.passed;
        (
            emit_outputs(&run, cfg.mode, cfg.seed, &cfg.out, cli.force)?,
            ok,
            true,
        )
    } else {
        let run = run_mode(&cfg, &runner)?;
        for line in &run.log {
            eprintln!("{line}");
        }
        let complete = run.report.complete;
        (
            emit_outputs(&run, cfg.mode, cfg.seed, &cfg.out, cli.force)?,
            true,
            complete,
        )
    };
    for path in written {
        println!("{}", path.display());
    }
    if !complete {
        return Err(HarnessError::Interrupted);
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = ctrlc::set_handler(request_interrupt) {
        eprintln!("warning: no interrupt handler: {e}");
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(HarnessError::Interrupted) => {
            eprintln!("interrupted; partial results written");
            ExitCode::from(130)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
