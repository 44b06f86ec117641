use clap::Args;
use vqpe_core::qpe::{idealized_accuracy_curves, AccuracyCurveConfig};
use vqpe_core::{build_tfim, diagonalize, qpe_resources, vqpe_resources, Result, VqpeError};

use crate::config::{resolve, Config};
use crate::model::parse_reference;
use crate::util::{fmt, parse_list, CsvFile, RunContext};

/// Accuracy-vs-evolution-time curves for the subspace method (exact,
/// Trotterized, shot-sampled) against the idealized phase-estimation model,
/// plus the operator-exponential resource-formula sweep.
#[derive(Args, Debug, Clone)]
pub struct QpeCompareArgs {
    #[arg(long)]
    pub n_sites: Option<usize>,
    #[arg(long, value_name = "J")]
    pub j_coupling: Option<f64>,
    #[arg(long, value_name = "H")]
    pub h_field: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub n_t_max: Option<usize>,
    /// Comma-separated shot counts.
    #[arg(long)]
    pub shots_list: Option<String>,
    /// SVD cutoffs paired with shots_list by index.
    #[arg(long)]
    pub s_sv_shots: Option<String>,
    /// Cutoff for the exact and Trotterized rows.
    #[arg(long)]
    pub s_sv_ideal: Option<f64>,
    /// Largest phase-estimation register size in the model rows.
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Target accuracies for the resource-formula sweep.
    #[arg(long)]
    pub eps_sweep: Option<String>,
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub stride: Option<usize>,
}

pub fn run(args: &QpeCompareArgs, cfg: &Config, ctx: &mut RunContext) -> Result<serde_json::Value> {
    let n_sites = resolve(args.n_sites, cfg, "qpe_compare", "n_sites", 10);
    let j_coupling = resolve(args.j_coupling, cfg, "qpe_compare", "j_coupling", 1.0);
    let h_field = resolve(args.h_field, cfg, "qpe_compare", "h_field", 2.0);
    let dt = resolve(args.dt, cfg, "qpe_compare", "dt", 0.05);
    let n_t_max = resolve(args.n_t_max, cfg, "qpe_compare", "n_t_max", 300);
    let s_sv_ideal = resolve(args.s_sv_ideal, cfg, "qpe_compare", "s_sv_ideal", 1e-5);
    let m_max = resolve(args.m_max, cfg, "qpe_compare", "m_max", 24u32);
    let seed = resolve(args.seed, cfg, "qpe_compare", "seed", 11u64);
    let stride = resolve(args.stride, cfg, "qpe_compare", "stride", 4);
    let shots_list: Vec<u64> = parse_list(&resolve(
        args.shots_list.clone(),
        cfg,
        "qpe_compare",
        "shots_list",
        "1000,10000,100000".to_string(),
    ))?;
    let s_sv_shots: Vec<f64> = parse_list(&resolve(
        args.s_sv_shots.clone(),
        cfg,
        "qpe_compare",
        "s_sv_shots",
        "1.0,0.6,0.2".to_string(),
    ))?;
    if shots_list.len() != s_sv_shots.len() {
        return Err(VqpeError::InvalidArgument(format!(
            "shots_list has {} entries but s_sv_shots has {}",
            shots_list.len(),
            s_sv_shots.len()
        )));
    }
    let eps_sweep: Vec<f64> = parse_list(&resolve(
        args.eps_sweep.clone(),
        cfg,
        "qpe_compare",
        "eps_sweep",
        "1e-1,1e-2,1e-3,1e-4".to_string(),
    ))?;
    let reference = parse_reference(&resolve(
        args.reference.clone(),
        cfg,
        "qpe_compare",
        "reference",
        "basis:0".to_string(),
    ))?;

    let ham = build_tfim(n_sites, j_coupling, h_field)?;
    let spectrum = diagonalize(&ham.to_dense()?)?;
    let psi = reference.realize(&spectrum)?;

    let curve_cfg = AccuracyCurveConfig {
        dt,
        n_t_max,
        shots_list: shots_list
            .iter()
            .copied()
            .zip(s_sv_shots.iter().copied())
            .collect(),
        s_sv_ideal,
        m_max,
        seed,
        stride,
    };
    let rows = idealized_accuracy_curves(&ham, &psi, &curve_cfg)?;
    let mut curves = CsvFile::create(
        &ctx.out_dir,
        "curves.csv",
        &[
            "method (name)",
            "index (n_t or m)",
            "max_evolution_time (1/energy)",
            "total_evolution_time (1/energy)",
            "abs_error (energy)",
        ],
    )?;
    for r in &rows {
        curves.row(&[
            r.method.clone(),
            fmt(r.index),
            fmt(r.max_evolution_time),
            fmt(r.total_evolution_time),
            fmt(r.error),
        ])?;
    }
    ctx.record(curves.finish()?);

    // resource-formula sweep; min ground overlap from the reference weights
    let min_overlap = {
        let sup = vqpe_core::support_space(&psi, &spectrum, 1e-12)?;
        sup.entries()
            .iter()
            .find(|(n, _)| *n == 0)
            .map(|(_, w)| *w)
            .unwrap_or(1e-12)
    };
    let mut resources = CsvFile::create(
        &ctx.out_dir,
        "resources.csv",
        &[
            "eps (energy)",
            "m_ancillae (count)",
            "trotter_step (1/energy)",
            "n_exp_qpe (count)",
            "n_exp_vqpe_s (count)",
            "n_exp_vqpe_h (count)",
            "n_exp_vqpe_total (count)",
        ],
    )?;
    for &eps in &eps_sweep {
        let q = qpe_resources(eps, &ham, min_overlap)?;
        let v = vqpe_resources(eps, &ham, n_t_max.max(1), n_t_max.max(1) as f64 * dt, 1.0)?;
        resources.row(&[
            fmt(eps),
            q.m_ancillae.to_string(),
            fmt(q.trotter_step),
            q.n_exp_qpe.map(fmt).unwrap_or_default(),
            v.n_exp_vqpe_s.map(fmt).unwrap_or_default(),
            v.n_exp_vqpe_h.map(fmt).unwrap_or_default(),
            v.n_exp_vqpe_total.map(fmt).unwrap_or_default(),
        ])?;
    }
    ctx.record(resources.finish()?);

    Ok(serde_json::json!({
        "n_sites": n_sites,
        "j_coupling": j_coupling,
        "h_field": h_field,
        "dt": dt,
        "n_t_max": n_t_max,
        "s_sv_ideal": s_sv_ideal,
        "shots_list": shots_list,
        "s_sv_shots": s_sv_shots,
        "m_max": m_max,
        "eps_sweep": eps_sweep,
        "seed": seed,
        "stride": stride,
        "min_overlap": min_overlap,
    }))
}
