use clap::Args;
use vqpe_core::gevp::relative_error;
use vqpe_core::{
    build_linear_spectrum, perfect_time_step, NoiseSpec, Propagator, Result, SolverConfig,
    StateVector, TraceEntry, TraceMatrices, TraceOptions,
};

use crate::config::{resolve, Config};
use crate::util::{fmt, CsvFile, RunContext};

/// Condition-number study: ground-state accuracy with and without
/// Toeplitz-mode noise against the untruncated condition number, on the
/// 20-level dE = 0.05 spectrum with a beta = 10 reference.
#[derive(Args, Debug, Clone)]
pub struct ConditionArgs {
    #[arg(long)]
    pub delta_e: Option<f64>,
    #[arg(long)]
    pub dimension: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub s_sv: Option<f64>,
    /// Noise standard deviation per generator entry.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub n_t_max: Option<usize>,
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn run(args: &ConditionArgs, cfg: &Config, ctx: &mut RunContext) -> Result<serde_json::Value> {
    let delta_e = resolve(args.delta_e, cfg, "condition", "delta_e", 0.05);
    let dimension = resolve(args.dimension, cfg, "condition", "dimension", 20);
    let beta = resolve(args.beta, cfg, "condition", "beta", 10.0);
    let s_sv = resolve(args.s_sv, cfg, "condition", "s_sv", 1e-1);
    let epsilon = resolve(args.epsilon, cfg, "condition", "epsilon", 1e-3);
    let n_t_max = resolve(args.n_t_max, cfg, "condition", "n_t_max", 200);
    let stride = resolve(args.stride, cfg, "condition", "stride", 5);
    let seed = resolve(args.seed, cfg, "condition", "seed", 7u64);

    let spectrum = build_linear_spectrum(delta_e, dimension)?.spectrum();
    let psi = StateVector::boltzmann(beta, &spectrum)?;
    let dt = perfect_time_step(delta_e, dimension - 1)?;
    let prop = Propagator::exact_eigen(spectrum.clone(), dt);

    let run_trace = |noise: Option<NoiseSpec>| -> Result<Vec<TraceEntry>> {
        vqpe_core::convergence_trace(
            &prop,
            &psi,
            TraceMatrices::HermitianToeplitz {
                spectrum: &spectrum,
            },
            &SolverConfig::hermitian(s_sv, dt),
            n_t_max,
            &TraceOptions {
                stride,
                noise,
                stop_at: None,
            },
        )
    };
    let clean = run_trace(None)?;
    let noisy = run_trace(Some(NoiseSpec::toeplitz(epsilon, seed)?))?;

    let mut csv = CsvFile::create(
        &ctx.out_dir,
        "condition.csv",
        &[
            "n_t (steps)",
            "rel_err_noisy (dimensionless)",
            "rel_err_clean (dimensionless)",
            "condition_number_noisy (dimensionless)",
            "condition_number_clean (dimensionless)",
        ],
    )?;
    for (c, n) in clean.iter().zip(noisy.iter()) {
        csv.row(&[
            c.n_t.to_string(),
            fmt(relative_error(n.estimate.ground(), 0.0)),
            fmt(relative_error(c.estimate.ground(), 0.0)),
            fmt(n.estimate.condition_number),
            fmt(c.estimate.condition_number),
        ])?;
    }
    ctx.record(csv.finish()?);

    Ok(serde_json::json!({
        "delta_e": delta_e,
        "dimension": dimension,
        "beta": beta,
        "s_sv": s_sv,
        "epsilon": epsilon,
        "n_t_max": n_t_max,
        "stride": stride,
        "seed": seed,
        "dt": dt,
        "noise_mode": "toeplitz",
    }))
}
