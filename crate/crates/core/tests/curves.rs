//! Shape checks on the accuracy-versus-evolution-time table: the subspace
//! rows beat the phase-estimation model at moderate accuracy and short
//! circuits, while the model wins at sufficiently small targets; heavy shot
//! counts converge to the exact rows.

use vqpe_core::qpe::{idealized_accuracy_curves, AccuracyCurveConfig, AccuracyRow};
use vqpe_core::*;

fn rows_for(method: &str, rows: &[AccuracyRow]) -> Vec<AccuracyRow> {
    rows.iter()
        .filter(|r| r.method == method)
        .cloned()
        .collect()
}

#[test]
fn crossover_shape_and_shot_limit() {
    let h = build_tfim(4, 1.0, 2.0).unwrap();
    let spec = diagonalize(&h.to_dense().unwrap()).unwrap();
    let psi = StateVector::basis(0, 16).unwrap();
    let cfg = AccuracyCurveConfig {
        dt: 0.1,
        n_t_max: 60,
        shots_list: vec![(10_000, 0.5)],
        s_sv_ideal: 1e-8,
        m_max: 40,
        seed: 5,
        stride: 4,
    };
    let rows = idealized_accuracy_curves(&h, &psi, &cfg).unwrap();
    let exact = rows_for("vqpe_exact", &rows);
    let qpe = rows_for("qpe_model", &rows);
    assert!(!exact.is_empty() && !qpe.is_empty());

    // moderate accuracy: the subspace rows get there with far shorter maximal
    // evolution time than the model
    let moderate = 0.05;
    let vqpe_time = exact
        .iter()
        .filter(|r| r.error < moderate)
        .map(|r| r.max_evolution_time)
        .fold(f64::INFINITY, f64::min);
    let qpe_time = qpe
        .iter()
        .filter(|r| r.error < moderate)
        .map(|r| r.max_evolution_time)
        .fold(f64::INFINITY, f64::min);
    assert!(
        vqpe_time < qpe_time,
        "vqpe time {vqpe_time} not below model time {qpe_time}"
    );

    // tiny targets: the model keeps halving while any finite-sampling row
    // floors out at its shot noise
    let sampled_moderate = rows_for("vqpe_shots_10000", &rows);
    let sampled_best = sampled_moderate
        .iter()
        .map(|r| r.error)
        .fold(f64::INFINITY, f64::min);
    let qpe_best = qpe.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
    assert!(
        qpe_best < sampled_best,
        "model best {qpe_best:.3e} should undercut the sampled floor {sampled_best:.3e}"
    );

    // the Trotterized model variant floors at the eigenphase offset
    let qpe_trot = rows_for("qpe_model_trotter", &rows);
    let trot_floor = qpe_trot.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
    assert!(trot_floor > qpe_best);

    // Heavy sampling converges to the exact-arithmetic run at the same
    // cutoff. A comfortable cutoff keeps the truncation's noise
    // amplification (~1/s_sv on the marginal modes) small.
    let prop = Propagator::exact_eigen(spec.clone(), cfg.dt);
    let solver = SolverConfig::unitary(0.3, cfg.dt);
    let run = |noise: Option<NoiseSpec>| {
        convergence_trace(
            &prop,
            &psi,
            TraceMatrices::Unitary,
            &solver,
            40,
            &TraceOptions {
                stride: 8,
                noise,
                stop_at: None,
            },
        )
        .unwrap()
    };
    let ideal = run(None);
    let heavy = run(Some(NoiseSpec::shots(10_000_000, 5).unwrap()));
    assert_eq!(ideal.len(), heavy.len());
    // a singular value sitting within shot noise of the cutoff can flip its
    // retention, so compare where both runs kept the same rank
    let stable: Vec<(&TraceEntry, &TraceEntry)> = ideal
        .iter()
        .zip(heavy.iter())
        .filter(|(a, b)| a.estimate.n_svd == b.estimate.n_svd)
        .collect();
    assert!(stable.len() * 2 >= ideal.len(), "too few rank-stable prefixes");
    // matrix-level noise accumulates ~sqrt(size)/s_sv per entry, so 1e7
    // shots pins the ground value to a few parts in 1e3 here
    for (a, b) in stable {
        assert!(
            (a.estimate.ground() - b.estimate.ground()).abs() < 1e-2,
            "n_t {}: {:.6} vs {:.6}",
            a.n_t,
            a.estimate.ground(),
            b.estimate.ground()
        );
    }
}
