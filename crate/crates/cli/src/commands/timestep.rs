use std::path::PathBuf;

use clap::Args;
use vqpe_core::gevp::relative_error;
use vqpe_core::timestep::refine_time_step;
use vqpe_core::{Propagator, Result, SolverConfig, TraceMatrices, TraceOptions};

use crate::config::{resolve, Config};
use crate::model::{build_system, parse_reference, SystemSource};
use crate::util::{fmt, parse_list, CsvFile, RunContext};

/// Time-step refinement rounds plus the total-simulation-time-to-accuracy
/// sweep over SVD cutoffs.
#[derive(Args, Debug, Clone)]
pub struct TimestepArgs {
    /// Hamiltonian JSON file (alternative to the harmonic builder).
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Harmonic builder "delta_e,dimension", used when no file is given.
    #[arg(long)]
    pub harmonic: Option<String>,
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long)]
    pub dt0: Option<f64>,
    #[arg(long)]
    pub s_sv: Option<f64>,
    #[arg(long)]
    pub n_t_budget: Option<usize>,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    /// Accuracy target for the time-to-accuracy sweep.
    #[arg(long)]
    pub target: Option<f64>,
    /// Cutoffs for the sweep.
    #[arg(long)]
    pub s_sv_list: Option<String>,
}

pub fn run(args: &TimestepArgs, cfg: &Config, ctx: &mut RunContext) -> Result<serde_json::Value> {
    let dt0 = resolve(args.dt0, cfg, "timestep", "dt0", 0.05);
    let s_sv = resolve(args.s_sv, cfg, "timestep", "s_sv", 1e-12);
    let n_t_budget = resolve(args.n_t_budget, cfg, "timestep", "n_t_budget", 60);
    let max_rounds = resolve(args.max_rounds, cfg, "timestep", "max_rounds", 8);
    let target = resolve(args.target, cfg, "timestep", "target", 1.6e-3);
    let s_sv_list: Vec<f64> = parse_list(&resolve(
        args.s_sv_list.clone(),
        cfg,
        "timestep",
        "s_sv_list",
        "1e-10,1e-6,1e-2".to_string(),
    ))?;
    let reference = parse_reference(&resolve(
        args.reference.clone(),
        cfg,
        "timestep",
        "reference",
        "boltzmann:1.0".to_string(),
    ))?;
    let harmonic = resolve(
        args.harmonic.clone(),
        cfg,
        "timestep",
        "harmonic",
        "0.75,16".to_string(),
    );

    let source = match &args.hamiltonian {
        Some(path) => SystemSource::HamiltonianFile(path),
        None => {
            let parts: Vec<f64> = parse_list(&harmonic)?;
            if parts.len() != 2 {
                return Err(vqpe_core::VqpeError::InvalidArgument(
                    "harmonic builder needs 'delta_e,dimension'".into(),
                ));
            }
            SystemSource::Harmonic {
                delta_e: parts[0],
                dimension: parts[1] as usize,
            }
        }
    };
    let system = build_system(source, reference)?;
    let exact_e0 = system.spectrum.ground_energy();

    let (final_dt, rounds) = refine_time_step(
        &system.spectrum,
        &system.reference,
        dt0,
        s_sv,
        n_t_budget,
        max_rounds,
    )?;

    let mut log = CsvFile::create(
        &ctx.out_dir,
        "rounds.csv",
        &[
            "round (index)",
            "dt (1/energy)",
            "plateau_through (steps)",
            "plateau_exclusive (steps)",
            "n_svd_final (count)",
            "best_energy (energy)",
        ],
    )?;
    for r in &rounds {
        log.row(&[
            r.round.to_string(),
            fmt(r.dt),
            r.plateau_span_through
                .map(|x| x.to_string())
                .unwrap_or_default(),
            r.plateau_span_exclusive
                .map(|x| x.to_string())
                .unwrap_or_default(),
            r.n_svd_final.to_string(),
            fmt(r.best_energy),
        ])?;
    }
    ctx.record(log.finish()?);

    // time to reach the accuracy target per cutoff, at the refined step
    let mut sweep = CsvFile::create(
        &ctx.out_dir,
        "time_to_accuracy.csv",
        &[
            "s_sv (dimensionless)",
            "total_time (1/energy)",
            "n_t (steps)",
        ],
    )?;
    let target_abs = target * exact_e0.abs().max(1.0);
    for &cutoff in &s_sv_list {
        let prop = Propagator::exact_eigen(system.spectrum.clone(), final_dt);
        let trace = vqpe_core::convergence_trace(
            &prop,
            &system.reference,
            TraceMatrices::HermitianToeplitz {
                spectrum: &system.spectrum,
            },
            &SolverConfig::hermitian(cutoff, final_dt),
            n_t_budget,
            &TraceOptions {
                stride: 1,
                noise: None,
                stop_at: Some((exact_e0, target_abs)),
            },
        )?;
        let hit = trace
            .iter()
            .find(|e| relative_error(e.estimate.ground(), exact_e0) < target);
        match hit {
            Some(e) => sweep.row(&[fmt(cutoff), fmt(e.total_time), e.n_t.to_string()])?,
            None => sweep.row(&[fmt(cutoff), String::new(), String::new()])?,
        }
    }
    ctx.record(sweep.finish()?);

    println!("final dt: {final_dt}");
    Ok(serde_json::json!({
        "dt0": dt0,
        "s_sv": s_sv,
        "n_t_budget": n_t_budget,
        "max_rounds": max_rounds,
        "target": target,
        "s_sv_list": s_sv_list,
        "final_dt": final_dt,
        "exact_e0": exact_e0,
    }))
}
