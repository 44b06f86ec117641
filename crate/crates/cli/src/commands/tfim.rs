use std::sync::Arc;

use clap::Args;
use rayon::prelude::*;
use vqpe_core::hamiltonian::ReferenceKind;
use vqpe_core::{
    build_tfim, diagonalize, NoiseSpec, Propagator, Result, SolverConfig, StateVector,
    TraceEntry, TraceMatrices, TraceOptions, VqpeError,
};

use crate::config::{resolve, Config};
use crate::model::parse_reference;
use crate::util::{fmt, CsvFile, RunContext};

/// Transverse-field Ising convergence study in the unitary formulation, with
/// exact or shot-sampled overlaps. Dense exact evolution up to 14 qubits;
/// larger chains propagate with Lanczos (no dense oracle column).
#[derive(Args, Debug, Clone)]
pub struct TfimArgs {
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
    /// Shots per Hadamard-test register; omit (or pass --exact) for exact
    /// overlaps.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Force exact overlaps (the default when --shots is absent).
    #[arg(long, default_value_t = false)]
    pub exact: bool,
    #[arg(long)]
    pub s_sv: Option<f64>,
    /// Reference state: basis:<k>, boltzmann:<beta>, or product:<a>,<b>.
    #[arg(long)]
    pub reference: Option<String>,
    /// Single-step evolution: "trotter1" (canonical term order) or "exact".
    #[arg(long)]
    pub evolution: Option<String>,
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long)]
    pub stride: Option<usize>,
}

pub fn run(args: &TfimArgs, cfg: &Config, ctx: &mut RunContext) -> Result<serde_json::Value> {
    let n_sites = resolve(args.n_sites, cfg, "tfim", "n_sites", 10);
    let j_coupling = resolve(args.j_coupling, cfg, "tfim", "j_coupling", 1.0);
    let h_field = resolve(args.h_field, cfg, "tfim", "h_field", 2.0);
    let dt = resolve(args.dt, cfg, "tfim", "dt", 0.05);
    let n_t_max = resolve(args.n_t_max, cfg, "tfim", "n_t_max", 300);
    let s_sv = resolve(args.s_sv, cfg, "tfim", "s_sv", 1e-1);
    let stride = resolve(args.stride, cfg, "tfim", "stride", 1);
    let n_seeds = resolve(args.seeds, cfg, "tfim", "seeds", 1u64);
    let evolution = resolve(
        args.evolution.clone(),
        cfg,
        "tfim",
        "evolution",
        "trotter1".to_string(),
    );
    let reference = parse_reference(&resolve(
        args.reference.clone(),
        cfg,
        "tfim",
        "reference",
        "basis:0".to_string(),
    ))?;
    let shots = if args.exact {
        None
    } else {
        args.shots.or_else(|| cfg.get("tfim", "shots"))
    };
    if n_sites > 24 {
        return Err(VqpeError::ResourceLimit(format!(
            "{n_sites} sites exceeds the statevector budget (24)"
        )));
    }

    let ham = build_tfim(n_sites, j_coupling, h_field)?;
    let dense_ok = n_sites <= 14;
    let (psi, prop, exact_e0) = if dense_ok {
        let spectrum = diagonalize(&ham.to_dense()?)?;
        let psi = reference.realize(&spectrum)?;
        let e0 = spectrum.ground_energy();
        let prop = match evolution.as_str() {
            "exact" => Propagator::exact_eigen(spectrum, dt),
            "trotter1" => Propagator::trotter1(ham.clone(), dt),
            other => {
                return Err(VqpeError::InvalidArgument(format!(
                    "unknown evolution '{other}' (expected exact or trotter1)"
                )))
            }
        };
        (psi, prop, Some(e0))
    } else {
        let dim = 1usize << n_sites;
        let psi = match reference {
            ReferenceKind::BasisIndex(k) => StateVector::basis(k, dim)?,
            ReferenceKind::Product { a, b } => StateVector::product(a, b, n_sites)?,
            ReferenceKind::Boltzmann { .. } => {
                return Err(VqpeError::InvalidArgument(
                    "boltzmann references need the dense spectrum (<= 14 sites)".into(),
                ))
            }
        };
        let prop = match evolution.as_str() {
            "exact" => Propagator::lanczos(Arc::new(ham.clone()), dt, 40, 1e-10),
            "trotter1" => Propagator::trotter1(ham.clone(), dt),
            other => {
                return Err(VqpeError::InvalidArgument(format!(
                    "unknown evolution '{other}' (expected exact or trotter1)"
                )))
            }
        };
        (psi, prop, None)
    };

    let seeds: Vec<u64> = match shots {
        Some(_) => (0..n_seeds.max(1)).collect(),
        None => vec![0],
    };
    let traces: Vec<(u64, Vec<TraceEntry>)> = seeds
        .par_iter()
        .map(|&seed| {
            let noise = shots
                .map(|m| NoiseSpec::shots(m, seed))
                .transpose()?;
            let trace = vqpe_core::convergence_trace(
                &prop,
                &psi,
                TraceMatrices::Unitary,
                &SolverConfig::unitary(s_sv, dt),
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

    let mut csv = CsvFile::create(
        &ctx.out_dir,
        "trace.csv",
        &[
            "seed (index)",
            "n_t (steps)",
            "eps_0 (energy)",
            "exact_e0 (energy)",
            "n_svd (count)",
            "total_time (1/energy)",
        ],
    )?;
    for (seed, trace) in &traces {
        for e in trace {
            csv.row(&[
                seed.to_string(),
                e.n_t.to_string(),
                fmt(e.estimate.ground()),
                exact_e0.map(fmt).unwrap_or_default(),
                e.estimate.n_svd.to_string(),
                fmt(e.total_time),
            ])?;
        }
    }
    ctx.record(csv.finish()?);

    if shots.is_some() && traces.len() > 1 {
        // mean/std bands over seeds at matched prefixes
        let mut bands = CsvFile::create(
            &ctx.out_dir,
            "bands.csv",
            &[
                "n_t (steps)",
                "mean_eps_0 (energy)",
                "std_eps_0 (energy)",
            ],
        )?;
        let base = &traces[0].1;
        for (i, e) in base.iter().enumerate() {
            let vals: Vec<f64> = traces
                .iter()
                .filter_map(|(_, t)| t.get(i))
                .filter(|x| x.n_t == e.n_t)
                .map(|x| x.estimate.ground())
                .collect();
            if vals.len() != traces.len() {
                continue;
            }
            let mean: f64 = vals.iter().sum::<f64>() / vals.len() as f64;
            let var: f64 = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                / (vals.len().saturating_sub(1).max(1)) as f64;
            bands.row(&[e.n_t.to_string(), fmt(mean), fmt(var.sqrt())])?;
        }
        ctx.record(bands.finish()?);
    }

    Ok(serde_json::json!({
        "n_sites": n_sites,
        "j_coupling": j_coupling,
        "h_field": h_field,
        "dt": dt,
        "n_t_max": n_t_max,
        "s_sv": s_sv,
        "stride": stride,
        "shots": shots,
        "seeds": seeds,
        "evolution": evolution,
        "exact_e0": exact_e0,
    }))
}
