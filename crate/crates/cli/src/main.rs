//! Command-line driver wiring the symbolic, thermodynamic, synthesis, leader
//! and geometry layers into reproducible experiments.

mod commands;
mod config;
mod out;

use anyhow::Result;
use clap::{Parser, Subcommand};
use config::RunConfig;
use out::OutDir;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mwl",
    about = "Gibbs-measure wavelet series: synthesis and multifractal estimation",
    version
)]
struct Cli {
    /// JSON configuration file; omitted fields take documented defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap the worker thread count (0 = default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact pressure and tau curves, with the avoidance-depth convergence table.
    Pressure,
    /// Synthesize the series and write the MWL1 dump.
    Synth,
    /// Wavelet-leader scaling function and Legendre spectrum.
    Spectrum,
    /// Box-counting dimensions and Riesz-energy scans.
    Dims,
    /// End-to-end verification; exits nonzero when gaps exceed tolerances.
    Verify,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MWL_LOG", "warn")).init();
    match run() {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.display().to_string();
    }
    cfg.validate()?;
    let out = OutDir::create(cfg.out_dir.as_ref(), cfg.echo())?;

    match cli.command {
        Command::Pressure => commands::pressure::run(&cfg, &out).map(|_| true),
        Command::Synth => commands::synth::run(&cfg, &out).map(|_| true),
        Command::Spectrum => commands::spectrum::run(&cfg, &out).map(|_| true),
        Command::Dims => commands::dims::run(&cfg, &out).map(|_| true),
        Command::Verify => commands::verify::run(&cfg, &out),
    }
}
