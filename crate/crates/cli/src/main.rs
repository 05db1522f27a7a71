//! Command-line front end.
//!
//! Subcommands: `classify`, `compare`, `curves`, `sample`, each driven by a
//! JSON experiment config. Exit codes: 0 on success, 1 on error, 2 when the
//! run produced no decision (everything undecided / nothing toggled).
//! `SHIFTLAB_THREADS` caps worker parallelism.

mod config;
mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ExperimentConfig;
use run::Outcome;

#[derive(Parser)]
#[command(name = "shiftlab", version, about = "weighted backward shift experiments")]
struct Cli {
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports and CSV files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the config horizon.
    #[arg(long, global = true)]
    horizon: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dynamical classification of a single weight sequence.
    Classify,
    /// Orthogonality report for a pair of weight sequences.
    Compare,
    /// Export autocorrelation / scale-overlap / marginal-overlap curves.
    Curves,
    /// Sample the invariant product measure to CSV.
    Sample,
}

fn init_threads() {
    if let Ok(val) = std::env::var("SHIFTLAB_THREADS") {
        if let Ok(n) = val.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn load_config(cli: &Cli) -> anyhow::Result<ExperimentConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("--config <path> is required"))?;
    let body = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
    let mut cfg: ExperimentConfig =
        serde_json::from_str(&body).map_err(|e| anyhow::anyhow!("parsing config: {e}"))?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(horizon) = cli.horizon {
        cfg.horizon = horizon;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let outcome = (|| -> anyhow::Result<Outcome> {
        let cfg = load_config(&cli)?;
        fs::create_dir_all(&cli.out)?;
        match cli.command {
            Command::Classify => run::run_classify(&cfg, &cli.out),
            Command::Compare => run::run_compare(&cfg, &cli.out),
            Command::Curves => run::run_curves(&cfg, &cli.out),
            Command::Sample => run::run_sample(&cfg, &cli.out),
        }
    })();
    match outcome {
        Ok(Outcome::Decided) => ExitCode::SUCCESS,
        Ok(Outcome::Undecided) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
