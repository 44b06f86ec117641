use std::path::PathBuf;

use clap::Args;
use vqpe_core::{support_space, Result, VqpeError};

use crate::config::{resolve, Config};
use crate::model::{build_system, parse_reference, SystemSource};
use crate::util::{fmt, parse_list, CsvFile, RunContext};

/// Support-space decomposition of a reference state: sorted squared overlaps
/// with the Hamiltonian eigenstates above a threshold.
#[derive(Args, Debug, Clone)]
pub struct SupportArgs {
    /// Hamiltonian JSON file.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Harmonic builder "delta_e,dimension".
    #[arg(long)]
    pub harmonic: Option<String>,
    /// TFIM builder "n_sites,J,h".
    #[arg(long)]
    pub tfim: Option<String>,
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

pub fn run(args: &SupportArgs, cfg: &Config, ctx: &mut RunContext) -> Result<serde_json::Value> {
    let threshold = resolve(args.threshold, cfg, "support", "threshold", 1e-6);
    let reference = parse_reference(&resolve(
        args.reference.clone(),
        cfg,
        "support",
        "reference",
        "boltzmann:1.0".to_string(),
    ))?;

    let tfim = args.tfim.clone().or_else(|| cfg.get("support", "tfim"));
    let harmonic = args
        .harmonic
        .clone()
        .or_else(|| cfg.get("support", "harmonic"));
    let source = if let Some(path) = &args.hamiltonian {
        SystemSource::HamiltonianFile(path)
    } else if let Some(spec) = &tfim {
        let parts: Vec<f64> = parse_list(spec)?;
        if parts.len() != 3 {
            return Err(VqpeError::InvalidArgument(
                "tfim builder needs 'n_sites,J,h'".into(),
            ));
        }
        SystemSource::Tfim {
            n_sites: parts[0] as usize,
            j: parts[1],
            h: parts[2],
        }
    } else {
        let spec = harmonic.unwrap_or_else(|| "0.75,16".to_string());
        let parts: Vec<f64> = parse_list(&spec)?;
        if parts.len() != 2 {
            return Err(VqpeError::InvalidArgument(
                "harmonic builder needs 'delta_e,dimension'".into(),
            ));
        }
        SystemSource::Harmonic {
            delta_e: parts[0],
            dimension: parts[1] as usize,
        }
    };

    let system = build_system(source, reference)?;
    let support = support_space(&system.reference, &system.spectrum, threshold)?;

    let mut csv = CsvFile::create(
        &ctx.out_dir,
        "support.csv",
        &[
            "rank (index)",
            "level (index)",
            "weight (dimensionless)",
            "energy (energy)",
        ],
    )?;
    for (rank, (level, weight)) in support.entries().iter().enumerate() {
        csv.row(&[
            rank.to_string(),
            level.to_string(),
            fmt(*weight),
            fmt(system.spectrum.energies()[*level]),
        ])?;
    }
    ctx.record(csv.finish()?);
    println!("Q = {} levels above {threshold}", support.q());

    Ok(serde_json::json!({
        "threshold": threshold,
        "q": support.q(),
        "max_level": support.max_level(),
    }))
}
