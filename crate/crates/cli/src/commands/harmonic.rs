use clap::Args;
use vqpe_core::gevp::relative_error;
use vqpe_core::{
    build_linear_spectrum, perfect_time_step, phase_circle, Propagator, Result, SolverConfig,
    StateVector, TimeGrid, TraceMatrices, TraceOptions, VqpeError,
};

use crate::config::{resolve, Config};
use crate::util::{fmt, CsvFile, RunContext};

/// Linear-spectrum convergence study: relative errors of the lowest
/// eigenvalues per time step, plus the phase-circle points of the grid.
#[derive(Args, Debug, Clone)]
pub struct HarmonicArgs {
    /// Level spacing of the linear spectrum.
    #[arg(long)]
    pub delta_e: Option<f64>,
    /// Number of levels.
    #[arg(long)]
    pub dimension: Option<usize>,
    /// Boltzmann weight of the reference state.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Time step, or "perfect" for 2 pi / ((n_t_max + 1) delta_e) using the
    /// support-space size.
    #[arg(long)]
    pub dt: Option<String>,
    #[arg(long)]
    pub n_t_max: Option<usize>,
    /// Singular-value truncation threshold.
    #[arg(long)]
    pub s_sv: Option<f64>,
}

pub fn run(args: &HarmonicArgs, cfg: &Config, ctx: &mut RunContext) -> Result<serde_json::Value> {
    let delta_e = resolve(args.delta_e, cfg, "harmonic", "delta_e", 0.75);
    let dimension = resolve(args.dimension, cfg, "harmonic", "dimension", 16);
    let beta = resolve(args.beta, cfg, "harmonic", "beta", 1.0);
    let n_t_max = resolve(args.n_t_max, cfg, "harmonic", "n_t_max", 30);
    let s_sv = resolve(args.s_sv, cfg, "harmonic", "s_sv", 1e-12);
    let dt_flag = resolve(
        args.dt.clone(),
        cfg,
        "harmonic",
        "dt",
        "perfect".to_string(),
    );

    let spectrum = build_linear_spectrum(delta_e, dimension)?.spectrum();
    let psi = StateVector::boltzmann(beta, &spectrum)?;
    let dt = if dt_flag == "perfect" {
        // perfect step for the full support space of the reference
        perfect_time_step(delta_e, dimension - 1)?
    } else {
        dt_flag
            .parse::<f64>()
            .map_err(|e| VqpeError::InvalidArgument(format!("dt '{dt_flag}': {e}")))?
    };

    let prop = Propagator::exact_eigen(spectrum.clone(), dt);
    let trace = vqpe_core::convergence_trace(
        &prop,
        &psi,
        TraceMatrices::HermitianToeplitz {
            spectrum: &spectrum,
        },
        &SolverConfig::hermitian(s_sv, dt),
        n_t_max,
        &TraceOptions::default(),
    )?;

    let n_levels = dimension.min(4);
    let mut header = vec!["n_t (steps)".to_string()];
    for k in 0..n_levels {
        header.push(format!("rel_err_{k} (dimensionless)"));
    }
    header.push("n_svd (count)".to_string());
    header.push("condition_number (dimensionless)".to_string());
    header.push("total_time (1/energy)".to_string());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = CsvFile::create(&ctx.out_dir, "convergence.csv", &header_refs)?;
    for entry in &trace {
        let mut cells = vec![entry.n_t.to_string()];
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
        cells.push(fmt(entry.total_time));
        csv.row(&cells)?;
    }
    ctx.record(csv.finish()?);

    let grid = TimeGrid::Linear { dt, n_t: n_t_max };
    let mut circle = CsvFile::create(
        &ctx.out_dir,
        "phase_circle.csv",
        &["j (index)", "cos_theta (dimensionless)", "sin_theta (dimensionless)"],
    )?;
    for (j, (c, s)) in phase_circle(&grid, delta_e).iter().enumerate() {
        circle.row(&[j.to_string(), fmt(*c), fmt(*s)])?;
    }
    ctx.record(circle.finish()?);

    Ok(serde_json::json!({
        "delta_e": delta_e,
        "dimension": dimension,
        "beta": beta,
        "dt": dt,
        "n_t_max": n_t_max,
        "s_sv": s_sv,
    }))
}
