use clap::Args;
use rayon::prelude::*;
use vqpe_core::gevp::relative_error;
use vqpe_core::{
    build_linear_spectrum, perfect_time_step, NoiseSpec, Propagator, Result, SolverConfig,
    StateVector, TraceEntry, TraceMatrices, TraceOptions, VqpeError,
};

use crate::config::{resolve, Config};
use crate::util::{fmt, parse_list, CsvFile, RunContext};

/// Gaussian-noise resilience study on the linear spectrum: per-seed
/// convergence traces and singular-value trajectories for each
/// (epsilon, s_sv) pair.
#[derive(Args, Debug, Clone)]
pub struct NoiseArgs {
    #[arg(long)]
    pub delta_e: Option<f64>,
    #[arg(long)]
    pub dimension: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Comma-separated noise standard deviations.
    #[arg(long)]
    pub epsilon_list: Option<String>,
    /// Comma-separated truncation thresholds, paired with epsilon_list by
    /// index (the lists must have equal length).
    #[arg(long)]
    pub s_sv_list: Option<String>,
    #[arg(long)]
    pub n_t_max: Option<usize>,
    /// Number of seeds (0..seeds).
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long)]
    pub stride: Option<usize>,
    /// Noise injection mode: "element" (per matrix element) or "toeplitz"
    /// (per generator entry, structure-preserving).
    #[arg(long)]
    pub noise_mode: Option<String>,
    /// Accept thresholds below the 100*epsilon guidance.
    #[arg(long, default_value_t = false)]
    pub allow_low_s_sv: bool,
}

pub fn run(args: &NoiseArgs, cfg: &Config, ctx: &mut RunContext) -> Result<serde_json::Value> {
    let delta_e = resolve(args.delta_e, cfg, "noise", "delta_e", 0.75);
    let dimension = resolve(args.dimension, cfg, "noise", "dimension", 16);
    let beta = resolve(args.beta, cfg, "noise", "beta", 1.0);
    let n_t_max = resolve(args.n_t_max, cfg, "noise", "n_t_max", 120);
    let stride = resolve(args.stride, cfg, "noise", "stride", 1);
    let n_seeds = resolve(args.seeds, cfg, "noise", "seeds", 20u64);
    let mode_name = resolve(
        args.noise_mode.clone(),
        cfg,
        "noise",
        "noise_mode",
        "element".to_string(),
    );
    let noise_mode = match mode_name.as_str() {
        "element" => vqpe_core::NoiseMode::Element,
        "toeplitz" => vqpe_core::NoiseMode::Toeplitz,
        other => {
            return Err(VqpeError::InvalidArgument(format!(
                "unknown noise mode '{other}' (expected element or toeplitz)"
            )))
        }
    };
    let eps_list: Vec<f64> = parse_list(&resolve(
        args.epsilon_list.clone(),
        cfg,
        "noise",
        "epsilon_list",
        "1e-2".to_string(),
    ))?;
    let s_sv_list: Vec<f64> = parse_list(&resolve(
        args.s_sv_list.clone(),
        cfg,
        "noise",
        "s_sv_list",
        "1.0".to_string(),
    ))?;
    if eps_list.len() != s_sv_list.len() {
        return Err(VqpeError::InvalidArgument(format!(
            "epsilon_list has {} entries but s_sv_list has {}",
            eps_list.len(),
            s_sv_list.len()
        )));
    }
    for (&eps, &s_sv) in eps_list.iter().zip(&s_sv_list) {
        if eps > 0.0 && s_sv < 100.0 * eps && !args.allow_low_s_sv {
            return Err(VqpeError::InvalidArgument(format!(
                "s_sv = {s_sv} is below the guidance of 100*epsilon = {} \
                 (pass --allow-low-s-sv to override)",
                100.0 * eps
            )));
        }
    }

    let spectrum = build_linear_spectrum(delta_e, dimension)?.spectrum();
    let psi = StateVector::boltzmann(beta, &spectrum)?;
    let dt = perfect_time_step(delta_e, dimension - 1)?;
    let n_levels = dimension.min(5);
    let n_sigma = 8usize.min(n_t_max + 1);

    for (pair_idx, (&eps, &s_sv)) in eps_list.iter().zip(&s_sv_list).enumerate() {
        let traces: Vec<(u64, Vec<TraceEntry>)> = (0..n_seeds)
            .into_par_iter()
            .map(|seed| {
                let prop = Propagator::exact_eigen(spectrum.clone(), dt);
                let noise = (eps > 0.0)
                    .then(|| NoiseSpec::new(noise_mode, eps, 1, seed))
                    .transpose()?;
                let trace = vqpe_core::convergence_trace(
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
                )?;
                Ok((seed, trace))
            })
            .collect::<Result<_>>()?;

        let tag = format!("eps{pair_idx}");
        let mut header = vec!["seed (index)".to_string(), "n_t (steps)".to_string()];
        for k in 0..n_levels {
            header.push(format!("rel_err_{k} (dimensionless)"));
        }
        header.push("n_svd (count)".to_string());
        header.push("condition_number (dimensionless)".to_string());
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut conv = CsvFile::create(&ctx.out_dir, &format!("convergence_{tag}.csv"), &refs)?;
        let mut sig_header = vec!["seed (index)".to_string(), "n_t (steps)".to_string()];
        for k in 1..=n_sigma {
            sig_header.push(format!("sigma_{k} (dimensionless)"));
        }
        let sig_refs: Vec<&str> = sig_header.iter().map(String::as_str).collect();
        let mut sig = CsvFile::create(&ctx.out_dir, &format!("singular_values_{tag}.csv"), &sig_refs)?;
        for (seed, trace) in &traces {
            for entry in trace {
                let mut cells = vec![seed.to_string(), entry.n_t.to_string()];
                for k in 0..n_levels {
                    let err = entry
                        .estimate
                        .eigenvalues
                        .get(k)
                        .map(|e| relative_error(*e, k as f64 * delta_e));
                    cells.push(err.map(fmt).unwrap_or_default());
                }
                cells.push(entry.estimate.n_svd.to_string());
                cells.push(fmt(entry.estimate.condition_number));
                conv.row(&cells)?;

                let mut scells = vec![seed.to_string(), entry.n_t.to_string()];
                for k in 0..n_sigma {
                    scells.push(
                        entry
                            .estimate
                            .singular_values
                            .get(k)
                            .map(|s| fmt(*s))
                            .unwrap_or_default(),
                    );
                }
                sig.row(&scells)?;
            }
        }
        ctx.record(conv.finish()?);
        ctx.record(sig.finish()?);
    }

    Ok(serde_json::json!({
        "delta_e": delta_e,
        "dimension": dimension,
        "beta": beta,
        "dt": dt,
        "n_t_max": n_t_max,
        "stride": stride,
        "seeds": n_seeds,
        "noise_mode": mode_name,
        "epsilon_list": eps_list,
        "s_sv_list": s_sv_list,
    }))
}
