//! Step-like-convergence detection and the iterative time-step refinement
//! heuristic, plus the noise-floor bound on the minimal useful time step.
//!
//! A too-small time step produces expansion states that add no singular value
//! above the threshold: the energy stalls until a later state finally
//! improves the span. The length of that plateau, measured through the first
//! improving state, defines the refined (larger) step.

use crate::error::{Result, VqpeError};
use crate::evolution::Propagator;
use crate::gevp::SolverConfig;
use crate::hamiltonian::{Spectrum, StateVector};
use crate::trace::{convergence_trace, TraceEntry, TraceMatrices, TraceOptions};

/// Minimal time step distinguishable above a noise floor `epsilon`:
/// `epsilon / delta_e_min` (hbar = 1).
pub fn minimal_time_step(epsilon: f64, delta_e_min: f64) -> Result<f64> {
    if epsilon < 0.0 || !epsilon.is_finite() {
        return Err(VqpeError::InvalidArgument(format!(
            "epsilon must be finite and non-negative, got {epsilon}"
        )));
    }
    if !delta_e_min.is_finite() || delta_e_min <= 0.0 {
        return Err(VqpeError::InvalidArgument(format!(
            "delta_e_min must be positive, got {delta_e_min}"
        )));
    }
    Ok(epsilon / delta_e_min)
}

/// Outcome of step detection on one trace.
#[derive(Debug, Clone)]
pub struct StepReport {
    pub is_step_like: bool,
    /// Maximal runs of constant n_svd, in order; the lengths sum to the
    /// trace length.
    pub plateau_lengths: Vec<usize>,
    /// `dt` scaled by the first plateau measured through the first improving
    /// state; equals the input `dt` when the trace is not step-like.
    pub recommended_dt: f64,
    /// Plateau span in steps, inclusive of the improving state.
    pub plateau_span_through: Option<usize>,
    /// Same plateau measured only to the last non-improving state.
    pub plateau_span_exclusive: Option<usize>,
}

fn n_svd_sequence(trace: &[TraceEntry], s_sv: f64) -> Vec<usize> {
    trace
        .iter()
        .map(|e| {
            e.estimate
                .singular_values
                .iter()
                .filter(|&&s| s > s_sv)
                .count()
        })
        .collect()
}

/// Detect step-like convergence from the per-prefix singular values,
/// re-thresholded at `s_sv`.
///
/// A plateau counts as step-like when it spans at least three prefixes
/// (two consecutive non-improving additions), starts in the first half of
/// the trace, and is not the terminal completion plateau — unless it starts
/// at index 0, i.e. the trace never improved at all.
pub fn detect_steps(trace: &[TraceEntry], s_sv: f64) -> Result<StepReport> {
    if trace.is_empty() {
        return Err(VqpeError::InvalidArgument("empty trace".into()));
    }
    let dt = if trace.len() >= 2 {
        (trace[1].total_time - trace[0].total_time) / (trace[1].n_t - trace[0].n_t) as f64
    } else {
        0.0
    };
    let n_svd = n_svd_sequence(trace, s_sv);
    let len = n_svd.len();

    // maximal constant runs
    let mut runs: Vec<(usize, usize)> = Vec::new(); // (start, len)
    let mut start = 0;
    for j in 1..=len {
        if j == len || n_svd[j] != n_svd[start] {
            runs.push((start, j - start));
            start = j;
        }
    }
    let plateau_lengths: Vec<usize> = runs.iter().map(|r| r.1).collect();

    let is_step_like = runs
        .iter()
        .any(|&(s, l)| l >= 3 && s <= len / 2 && (s + l < len || s == 0));

    // First stall anchors the refinement factor.
    let first_stall = (1..len).find(|&j| n_svd[j] == n_svd[j - 1]);
    let (mut through, mut exclusive) = (None, None);
    if let Some(j) = first_stall {
        let mut i0 = j - 1;
        while i0 > 0 && n_svd[i0 - 1] == n_svd[j - 1] {
            i0 -= 1;
        }
        match (j + 1..len).find(|&jj| n_svd[jj] > n_svd[jj - 1]) {
            Some(jstar) => {
                through = Some(jstar - i0);
                exclusive = Some(jstar - 1 - i0);
            }
            None => {
                // plateau runs to the end of the budget: use its observed
                // length as a lower bound
                through = Some(len - i0);
                exclusive = Some(len - 1 - i0);
            }
        }
    }
    let recommended_dt = if is_step_like {
        dt * through.unwrap_or(1) as f64
    } else {
        dt
    };
    Ok(StepReport {
        is_step_like,
        plateau_lengths,
        recommended_dt: recommended_dt.max(dt),
        plateau_span_through: through,
        plateau_span_exclusive: exclusive,
    })
}

/// One refinement round.
#[derive(Debug, Clone)]
pub struct RefineRound {
    pub round: usize,
    pub dt: f64,
    pub plateau_span_through: Option<usize>,
    pub plateau_span_exclusive: Option<usize>,
    pub n_svd_final: usize,
    pub best_energy: f64,
}

/// Iteratively enlarge the time step until convergence stops being
/// step-like: run a noiseless exact trace at the current dt, and when a
/// plateau is found multiply dt by its span (through the first improving
/// state). Returns the final dt and the per-round log.
pub fn refine_time_step(
    spectrum: &Spectrum,
    psi0: &StateVector,
    dt0: f64,
    s_sv: f64,
    n_t_budget: usize,
    max_rounds: usize,
) -> Result<(f64, Vec<RefineRound>)> {
    if !dt0.is_finite() || dt0 <= 0.0 {
        return Err(VqpeError::InvalidArgument("dt0 must be positive".into()));
    }
    if n_t_budget == 0 {
        return Err(VqpeError::InvalidArgument(
            "n_t_budget must be positive".into(),
        ));
    }
    let mut dt = dt0;
    let mut log = Vec::new();
    for round in 0..max_rounds {
        let prop = Propagator::exact_eigen(spectrum.clone(), dt);
        let trace = convergence_trace(
            &prop,
            psi0,
            TraceMatrices::HermitianToeplitz { spectrum },
            &SolverConfig::hermitian(s_sv, dt),
            n_t_budget,
            &TraceOptions::default(),
        )?;
        let report = detect_steps(&trace, s_sv)?;
        let last = trace.last().expect("non-empty trace");
        log.push(RefineRound {
            round,
            dt,
            plateau_span_through: report.plateau_span_through,
            plateau_span_exclusive: report.plateau_span_exclusive,
            n_svd_final: last.estimate.n_svd,
            best_energy: last.estimate.ground(),
        });
        if !report.is_step_like {
            break;
        }
        dt = report.recommended_dt;
    }
    Ok((dt, log))
}
