//! Experiment runner for the VQPE laboratory. Every subcommand writes
//! plot-ready CSV files plus a manifest.json snapshot into the output
//! directory; identical flags and seeds reproduce identical CSV bytes.
//!
//! Exit codes: 0 success, 2 invalid arguments or inputs, 3 numerical
//! failure, 4 I/O failure.

mod commands;
mod config;
mod model;
mod util;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use config::Config;
use util::{resolve_out_dir, RunContext};
use vqpe_core::Result;

#[derive(Parser)]
#[command(
    name = "vqpe",
    version,
    about = "Real-time subspace eigenvalue studies: Toeplitz overlap assembly, \
             SVD-regularized generalized eigensolvers, noise models, and \
             phase-estimation resource comparisons"
)]
struct Cli {
    /// JSON config file mirroring the flags (flags take precedence).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: $VQPE_OUT_DIR, then ./vqpe-out).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linear-spectrum convergence study (eigenvalue errors per time step).
    Harmonic(commands::harmonic::HarmonicArgs),
    /// Gaussian-noise resilience study with singular-value trajectories.
    Noise(commands::noise::NoiseArgs),
    /// Condition-number study on the 20-level spectrum with Toeplitz noise.
    Condition(commands::condition::ConditionArgs),
    /// Transverse-field Ising convergence in the unitary formulation.
    Tfim(commands::tfim::TfimArgs),
    /// Time-step refinement rounds and time-to-accuracy sweep.
    Timestep(commands::timestep::TimestepArgs),
    /// Accuracy and resource comparison against the phase-estimation model.
    QpeCompare(commands::qpe_compare::QpeCompareArgs),
    /// Support-space decomposition of a reference state.
    Support(commands::support::SupportArgs),
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = Config::load(cli.config.as_deref())?;
    let out_dir = resolve_out_dir(cli.out_dir.as_deref())?;
    let mut ctx = RunContext::new(out_dir);
    let (name, snapshot, seeds) = match &cli.command {
        Command::Harmonic(args) => (
            "harmonic",
            commands::harmonic::run(args, &cfg, &mut ctx)?,
            vec![],
        ),
        Command::Noise(args) => {
            let snap = commands::noise::run(args, &cfg, &mut ctx)?;
            let seeds = snap["seeds"]
                .as_u64()
                .map(|n| (0..n).collect())
                .unwrap_or_default();
            ("noise", snap, seeds)
        }
        Command::Condition(args) => {
            let snap = commands::condition::run(args, &cfg, &mut ctx)?;
            let seeds = snap["seed"].as_u64().map(|s| vec![s]).unwrap_or_default();
            ("condition", snap, seeds)
        }
        Command::Tfim(args) => {
            let snap = commands::tfim::run(args, &cfg, &mut ctx)?;
            let seeds = snap["seeds"]
                .as_array()
                .map(|a| a.iter().filter_map(|v| v.as_u64()).collect())
                .unwrap_or_default();
            ("tfim", snap, seeds)
        }
        Command::Timestep(args) => (
            "timestep",
            commands::timestep::run(args, &cfg, &mut ctx)?,
            vec![],
        ),
        Command::QpeCompare(args) => {
            let snap = commands::qpe_compare::run(args, &cfg, &mut ctx)?;
            let seeds = snap["seed"].as_u64().map(|s| vec![s]).unwrap_or_default();
            ("qpe_compare", snap, seeds)
        }
        Command::Support(args) => (
            "support",
            commands::support::run(args, &cfg, &mut ctx)?,
            vec![],
        ),
    };
    let manifest = ctx.write_manifest(name, snapshot, seeds)?;
    eprintln!(
        "wrote {} outputs and {}",
        ctx.outputs.len(),
        manifest.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
