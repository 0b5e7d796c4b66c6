//! Runs the hriesz experiments and writes their CSV reports.
//!
//! Exit status: 0 when every checked row passes, 1 when any fails, 2 on a
//! configuration or I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hriesz::experiments::{emit_csv, run, summary, Experiment, ExperimentConfig, ExperimentReport};

#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML file overriding the defaults. For `all`, one table per experiment.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// CSV output path. For `all`, a directory receiving one file per experiment.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for the randomized field family and samplers.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Plancherel identity and eigenfunction residuals
    Plancherel,
    /// Bilinear Riesz convergence and the maximal-operator family ratio
    Converge,
    /// Dilation identities and square-function scaling in delta
    SquareScaling,
    /// Riesz kernel decay, prefactor and differentiation identity
    KernelDecay,
    /// Cutoff splittings, partitions, sigma support and Taylor regrouping
    Decomp,
    /// Every experiment in turn
    All,
}

impl Command {
    fn experiment(self) -> Option<Experiment> {
        match self {
            Self::Plancherel => Some(Experiment::Plancherel),
            Self::Converge => Some(Experiment::Converge),
            Self::SquareScaling => Some(Experiment::SquareScaling),
            Self::KernelDecay => Some(Experiment::KernelDecay),
            Self::Decomp => Some(Experiment::Decomp),
            Self::All => None,
        }
    }
}

fn configure(cli: &Cli, kind: Experiment, sectioned: bool) -> hriesz::Result<ExperimentConfig> {
    let mut cfg = match (&cli.config, sectioned) {
        (Some(path), false) => ExperimentConfig::load(kind, path)?,
        (Some(path), true) => ExperimentConfig::load_section(kind, path)?,
        (None, _) => ExperimentConfig::default_for(kind),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn execute(kind: Experiment, cfg: &ExperimentConfig, out: &Path) -> hriesz::Result<ExperimentReport> {
    println!("== {kind} (config {})", cfg.hash());
    let report = run(kind, cfg)?;
    print!("{}", summary(&report));
    emit_csv(&report, out)?;
    println!("wrote {}", out.display());
    Ok(report)
}

fn main_inner(cli: &Cli) -> hriesz::Result<bool> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(hriesz::Error::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| hriesz::Error::Config(format!("thread pool: {e}")))?;
    }
    let mut all_pass = true;
    match cli.command.experiment() {
        Some(kind) => {
            let cfg = configure(cli, kind, false)?;
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output_path));
            all_pass &= execute(kind, &cfg, &out)?.all_pass();
        }
        None => {
            let configs = Experiment::ALL
                .into_iter()
                .map(|kind| configure(cli, kind, true).map(|c| (kind, c)))
                .collect::<hriesz::Result<Vec<_>>>()?;
            if let Some(dir) = &cli.out {
                std::fs::create_dir_all(dir).map_err(|source| hriesz::Error::Io {
                    path: dir.clone(),
                    source,
                })?;
            }
            for (kind, cfg) in configs {
                let out = match &cli.out {
                    Some(dir) => dir.join(format!("{kind}.csv")),
                    None => PathBuf::from(&cfg.output_path),
                };
                all_pass &= execute(kind, &cfg, &out)?.all_pass();
            }
        }
    }
    Ok(all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
