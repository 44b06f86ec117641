//! Convergence traces: one SVD-regularized solve per prefix of the expansion
//! sequence, reusing a single measured generator (no re-measurement between
//! prefixes, mirroring how an experiment accumulates data).

use crate::error::{Result, VqpeError};
use crate::evolution::{evolved_sequence, ApplyHamiltonian, Propagator};
use crate::gevp::{solve_gevp, solve_unitary_gevp, Formulation, SolverConfig, SpectrumEstimate};
use crate::hamiltonian::{Spectrum, StateVector};
use crate::noise::{perturb, perturb_generator, sampled_overlap_generator, NoiseMode, NoiseSpec};
use crate::overlap::{
    assemble_h_full, assemble_h_toeplitz, assemble_s, assemble_u, measure_overlap_generator,
    TimeGrid,
};
use crate::CMat;

/// Where the second matrix of the secular equation comes from.
pub enum TraceMatrices<'a> {
    /// Toeplitz Hamiltonian from the exact spectrum; requires a propagator
    /// that commutes with H (exact evolution).
    HermitianToeplitz { spectrum: &'a Spectrum },
    /// Entry-by-entry Hamiltonian over explicitly stored evolved states; the
    /// route for Trotterized expansion states.
    HermitianFull { ham: &'a dyn ApplyHamiltonian },
    /// Unitary formulation: everything comes from the generator.
    Unitary,
}

/// Knobs for a trace run.
pub struct TraceOptions {
    /// Solve every `stride`-th prefix (the final prefix is always solved).
    pub stride: usize,
    /// Optional noise applied once to the full-size data before prefixing.
    pub noise: Option<NoiseSpec>,
    /// Stop early once `|eps_0 - target_energy| < target_tol`.
    pub stop_at: Option<(f64, f64)>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            stride: 1,
            noise: None,
            stop_at: None,
        }
    }
}

/// One prefix summary.
#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub n_t: usize,
    pub estimate: SpectrumEstimate,
    /// Deepest propagation time in the prefix, `n_t * dt`.
    pub total_time: f64,
    /// Cumulative evolution time spent measuring the generator up to this
    /// prefix: `sum_{m<=n_t+1} m dt`.
    pub cumulative_evolution_time: f64,
}

/// Run the generalized eigenproblem over every (strided) prefix of the
/// expansion sequence.
pub fn convergence_trace(
    prop: &Propagator,
    psi0: &StateVector,
    matrices: TraceMatrices<'_>,
    config: &SolverConfig,
    n_t_max: usize,
    opts: &TraceOptions,
) -> Result<Vec<TraceEntry>> {
    let stride = opts.stride.max(1);
    let dt = prop.dt();

    // Measure once at full size.
    let generator = match opts.noise {
        Some(spec) if spec.mode == NoiseMode::Shots => {
            sampled_overlap_generator(prop, psi0, n_t_max, spec.shots, spec.seed)?
        }
        Some(spec) if spec.mode == NoiseMode::Toeplitz => {
            let gen = measure_overlap_generator(prop, psi0, n_t_max)?;
            perturb_generator(&gen, &spec)?
        }
        _ => measure_overlap_generator(prop, psi0, n_t_max)?,
    };

    // Assemble the full-size pair once; prefixes are leading submatrices, so
    // element noise drawn here stays consistent across prefixes.
    let s_full = assemble_s(&generator, n_t_max)?;
    let other_full: CMat = match (&matrices, config.formulation) {
        (TraceMatrices::Unitary, Formulation::Unitary) => assemble_u(&generator, n_t_max)?,
        (TraceMatrices::HermitianToeplitz { spectrum }, Formulation::Hermitian) => {
            if !prop.commutes_with_hamiltonian() {
                return Err(VqpeError::ContractViolation(
                    "Toeplitz Hamiltonian assembly requires exact evolution; \
                     use TraceMatrices::HermitianFull for Trotterized states"
                        .into(),
                ));
            }
            assemble_h_toeplitz(spectrum, psi0, &TimeGrid::Linear { dt, n_t: n_t_max })?
        }
        (TraceMatrices::HermitianFull { ham }, Formulation::Hermitian) => {
            let states = evolved_sequence(prop, psi0, n_t_max)?;
            assemble_h_full(*ham, &states)
        }
        _ => {
            return Err(VqpeError::InvalidArgument(
                "matrix source does not match the solver formulation".into(),
            ))
        }
    };

    // S (and U, sharing its generator) picked up Toeplitz/shot noise above;
    // element noise lands on the assembled matrices, and in Toeplitz mode a
    // Hermitian-formulation H still needs its own per-lag draws.
    let other_seed_salt = 0x9e37_79b9_7f4a_7c15u64;
    let (s_full, other_full) = match opts.noise {
        Some(spec) if spec.mode == NoiseMode::Element => (
            perturb(&s_full, &spec)?,
            perturb(
                &other_full,
                &NoiseSpec {
                    seed: spec.seed ^ other_seed_salt,
                    ..spec
                },
            )?,
        ),
        Some(spec)
            if spec.mode == NoiseMode::Toeplitz
                && config.formulation == Formulation::Hermitian =>
        {
            let noisy_h = perturb(
                &other_full,
                &NoiseSpec {
                    seed: spec.seed ^ other_seed_salt,
                    ..spec
                },
            )?;
            (s_full, noisy_h)
        }
        _ => (s_full, other_full),
    };

    let mut out = Vec::new();
    let mut n_t = 0usize;
    loop {
        let dim = n_t + 1;
        let s = s_full.as_ref().submatrix(0, 0, dim, dim).to_owned();
        let other = other_full.as_ref().submatrix(0, 0, dim, dim).to_owned();
        let estimate = match config.formulation {
            Formulation::Hermitian => solve_gevp(&other, &s, config),
            Formulation::Unitary => solve_unitary_gevp(&other, &s, config),
        };
        match estimate {
            Ok(estimate) => {
                let stop = opts
                    .stop_at
                    .map(|(target, tol)| (estimate.ground() - target).abs() < tol)
                    .unwrap_or(false);
                out.push(TraceEntry {
                    n_t,
                    estimate,
                    total_time: n_t as f64 * dt,
                    cumulative_evolution_time: dt * ((n_t + 1) * (n_t + 2)) as f64 / 2.0,
                });
                if stop {
                    break;
                }
            }
            // Under aggressive truncation early prefixes can be rank-empty;
            // skip them rather than aborting the whole trace.
            Err(VqpeError::DegenerateProblem(_)) if n_t < n_t_max => {}
            Err(e) => return Err(e),
        }
        if n_t == n_t_max {
            break;
        }
        n_t = (n_t + stride).min(n_t_max);
    }
    if out.is_empty() {
        return Err(VqpeError::DegenerateProblem(format!(
            "no prefix up to n_t = {n_t_max} produced a singular value above {}",
            config.s_sv
        )));
    }
    Ok(out)
}
