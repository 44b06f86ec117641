//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured numbers. Heavy tests serialize through a mutex so their
//! runtime checks are not distorted by parallel siblings.

use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use vqpe_core::gevp::relative_error;
use vqpe_core::hamiltonian::PauliSumHamiltonian;
use vqpe_core::overlap::{gram_matrix, toeplitz_deviation};
use vqpe_core::pcc::{log_log_slope, OmegaMode};
use vqpe_core::qpe::{
    qpe_closed_forms, symmetric_trotter_unitary, trotter1_eigenphase_ground, vqpe_closed_forms,
};
use vqpe_core::*;

fn heavy_lock() -> std::sync::MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn tfim10_spectrum() -> &'static Spectrum {
    static SPEC: OnceLock<Spectrum> = OnceLock::new();
    SPEC.get_or_init(|| {
        let h = build_tfim(10, 1.0, 2.0).unwrap();
        diagonalize(&h.to_dense().unwrap()).unwrap()
    })
}

/// Criterion 1 — harmonic exactness: on the 16-level linear spectrum at the
/// perfect time step the four lowest eigenvalues are exact after 15 steps.
#[test]
fn c01_harmonic_exactness() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let spec = build_linear_spectrum(0.75, 16).unwrap().spectrum();
    let psi = StateVector::boltzmann(1.0, &spec).unwrap();
    let dt = perfect_time_step(0.75, 15).unwrap();
    assert!((dt - 2.0 * std::f64::consts::PI / 12.0).abs() < 1e-15);
    let prop = Propagator::exact_eigen(spec.clone(), dt);
    let trace = convergence_trace(
        &prop,
        &psi,
        TraceMatrices::HermitianToeplitz { spectrum: &spec },
        &SolverConfig::hermitian(1e-12, dt),
        15,
        &TraceOptions::default(),
    )
    .unwrap();
    let est = &trace.last().unwrap().estimate;
    let mut worst: f64 = 0.0;
    for (k, exact) in [0.0, 0.75, 1.5, 2.25].iter().enumerate() {
        worst = worst.max(relative_error(est.eigenvalues[k], *exact));
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-9, "worst relative error {worst:.3e}");
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:.2?}");
    println!(
        "acceptance 01 harmonic_exactness: PASS (worst rel err {worst:.2e}, {elapsed:.1?})"
    );
}

/// Criterion 2 — the perfect-step grid satisfies the phase cancellation
/// conditions to round-off.
#[test]
fn c02_perfect_step_pcc() {
    let dt = perfect_time_step(0.75, 15).unwrap();
    let grid = TimeGrid::Linear { dt, n_t: 15 };
    let energies: Vec<f64> = (0..16).map(|n| n as f64 * 0.75).collect();
    let report = pcc_residual(&grid, &energies).unwrap();
    assert!(
        report.max_residual() < 1e-12,
        "max residual {:.3e}",
        report.max_residual()
    );
    println!(
        "acceptance 02 perfect_step_pcc: PASS (max residual {:.2e})",
        report.max_residual()
    );
}

/// Criterion 3 — Toeplitz invariance of Trotterized overlap matrices, the
/// shift identity, and the linear measurement count.
#[test]
fn c03_toeplitz_invariance() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let dt = 0.05;
    let mut worst_dev: f64 = 0.0;
    let mut worst_cross: f64 = 0.0;
    for n_sites in 2..=10usize {
        let h = build_tfim(n_sites, 1.0, 2.0).unwrap();
        let psi = StateVector::basis(0, 1 << n_sites).unwrap();
        let prop = Propagator::trotter1(h.clone(), dt);
        let n_t = 12;
        // brute-force Gram matrix of explicitly stored Trotterized states
        let states = evolved_sequence(&prop, &psi, n_t + 1).unwrap();
        let s_gram = gram_matrix(&states[..=n_t]);
        worst_dev = worst_dev.max(toeplitz_deviation(&s_gram));
        // generator route: U[j,k] = S[j,k+1] bit for bit
        let gen = measure_overlap_generator(&prop, &psi, n_t).unwrap();
        let s_ext = assemble_s(&gen, n_t + 1).unwrap();
        let u = assemble_u(&gen, n_t).unwrap();
        for j in 0..=n_t {
            for k in 0..=n_t {
                assert_eq!(u[(j, k)], s_ext[(j, k + 1)], "shift identity must be exact");
                // cross-check against the independently propagated states
                worst_cross = worst_cross.max((u[(j, k)] - states[j].inner(&states[k + 1])).norm());
            }
        }
        assert_eq!(gen.evaluation_count(), n_t + 2);
    }
    assert!(worst_dev < 1e-12, "Toeplitz deviation {worst_dev:.3e}");
    assert!(worst_cross < 1e-12, "U cross-check {worst_cross:.3e}");
    // measurement count stays linear up to N_T = 100 on the 10-qubit chain
    let h10 = build_tfim(10, 1.0, 2.0).unwrap();
    let psi10 = StateVector::basis(0, 1024).unwrap();
    let prop10 = Propagator::trotter1(h10, dt);
    for n_t in [0usize, 1, 17, 100] {
        let gen = measure_overlap_generator(&prop10, &psi10, n_t).unwrap();
        assert_eq!(gen.evaluation_count(), n_t + 2, "count at n_t = {n_t}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:.2?}");
    println!(
        "acceptance 03 toeplitz_invariance: PASS (S dev {worst_dev:.2e}, U cross {worst_cross:.2e}, {elapsed:.1?})"
    );
}

/// Criterion 4 — Hermitian and unitary formulations agree on the retained
/// eigenvalues when the retained span is invariant and no |E| dt reaches pi.
#[test]
fn c04_formulation_equivalence() {
    let mut worst: f64 = 0.0;

    // harmonic: 8 levels on the 16-point cancellation grid
    let spec = build_linear_spectrum(0.75, 8).unwrap().spectrum();
    let psi = StateVector::boltzmann(1.0, &spec).unwrap();
    let dt = perfect_time_step(0.75, 15).unwrap();
    let prop = Propagator::exact_eigen(spec.clone(), dt);
    let ha = convergence_trace(
        &prop,
        &psi,
        TraceMatrices::HermitianToeplitz { spectrum: &spec },
        &SolverConfig::hermitian(1e-12, dt),
        15,
        &TraceOptions::default(),
    )
    .unwrap();
    let ua = convergence_trace(
        &prop,
        &psi,
        TraceMatrices::Unitary,
        &SolverConfig::unitary(1e-12, dt),
        15,
        &TraceOptions::default(),
    )
    .unwrap();
    let (a, b) = (&ha.last().unwrap().estimate, &ua.last().unwrap().estimate);
    assert_eq!(a.n_svd, b.n_svd);
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        worst = worst.max((x - y).abs());
    }

    // TFIM(4) at dt = 0.3 (|E|max * dt < pi), reference |0000>
    let h4 = build_tfim(4, 1.0, 2.0).unwrap();
    let spec4 = diagonalize(&h4.to_dense().unwrap()).unwrap();
    assert!(spec4.energies().iter().all(|e| e.abs() * 0.3 < std::f64::consts::PI));
    let psi4 = StateVector::basis(0, 16).unwrap();
    let prop4 = Propagator::exact_eigen(spec4.clone(), 0.3);
    let h_trace = convergence_trace(
        &prop4,
        &psi4,
        TraceMatrices::HermitianToeplitz { spectrum: &spec4 },
        &SolverConfig::hermitian(1e-6, 0.3),
        40,
        &TraceOptions::default(),
    )
    .unwrap();
    let u_trace = convergence_trace(
        &prop4,
        &psi4,
        TraceMatrices::Unitary,
        &SolverConfig::unitary(1e-6, 0.3),
        40,
        &TraceOptions::default(),
    )
    .unwrap();
    let (a, b) = (
        &h_trace.last().unwrap().estimate,
        &u_trace.last().unwrap().estimate,
    );
    assert_eq!(a.n_svd, b.n_svd);
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        worst = worst.max((x - y).abs());
    }

    assert!(worst < 1e-8, "worst formulation disagreement {worst:.3e}");
    println!("acceptance 04 formulation_equivalence: PASS (worst gap {worst:.2e})");
}

/// Criterion 5 — TFIM(10) simulator study: exact-evolution VQPE reaches
/// 1.6e-3 of the dense-oracle ground energy within 600 steps, and the
/// Trotterized run floors at the dense Trotter eigenphase offset.
#[test]
fn c05_tfim_convergence() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let spec = tfim10_spectrum();
    let e0 = spec.ground_energy();
    // frozen from the pre-build dense oracle
    assert!((e0 - -21.139319115631).abs() < 1e-9);
    let h = build_tfim(10, 1.0, 2.0).unwrap();
    let psi = StateVector::basis(0, 1024).unwrap();
    let dt = 0.05;
    let target = 1.6e-3;

    let exact_prop = Propagator::exact_eigen(spec.clone(), dt);
    let trace = convergence_trace(
        &exact_prop,
        &psi,
        TraceMatrices::Unitary,
        &SolverConfig::unitary(1e-1, dt),
        600,
        &TraceOptions {
            stride: 1,
            noise: None,
            stop_at: Some((e0, target)),
        },
    )
    .unwrap();
    let last = trace.last().unwrap();
    let err = (last.estimate.ground() - e0).abs();
    assert!(
        err < target,
        "exact run only reached {err:.3e} at n_t {}",
        last.n_t
    );
    assert!(last.n_t <= 600);

    // Trotterized error floor equals the dense Trotter eigenphase offset.
    // The floor run uses a small cutoff so the variational tail error sits
    // far below the 1e-6 comparison scale (s_sv is pinned only for the
    // convergence clause above).
    let (e0_trot, lam_mod) = trotter1_eigenphase_ground(&h, dt).unwrap();
    assert!((lam_mod - 1.0).abs() < 1e-10);
    let floor_oracle = (e0_trot - e0).abs();
    let trot_prop = Propagator::trotter1(h.clone(), dt);
    let trot_trace = convergence_trace(
        &trot_prop,
        &psi,
        TraceMatrices::Unitary,
        &SolverConfig::unitary(1e-6, dt),
        420,
        &TraceOptions {
            stride: 20,
            noise: None,
            stop_at: Some((e0_trot, 5e-8)),
        },
    )
    .unwrap();
    let trot_last = trot_trace.last().unwrap();
    let floor_measured = (trot_last.estimate.ground() - e0).abs();
    assert!(
        (floor_measured - floor_oracle).abs() < 1e-6,
        "floor {floor_measured:.6e} vs oracle {floor_oracle:.6e}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:.2?}");
    println!(
        "acceptance 05 tfim_convergence: PASS (exact err {err:.2e} at n_t {}, \
         trotter floor {floor_measured:.6e} vs oracle {floor_oracle:.6e}, {elapsed:.1?})",
        last.n_t
    );
}

/// Criterion 6 — noise resilience: eigenvalues sharper than the matrix-element
/// noise, singular-value crossings gate the extraction, and SVD pruning keeps
/// ill-conditioned problems accurate.
#[test]
fn c06_noise_resilience() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let eps = 1e-2;
    let s_sv = 0.9;
    let exact = [0.0, 0.75, 1.5, 2.25, 3.0];
    let spec = build_linear_spectrum(0.75, 16).unwrap().spectrum();
    let psi = StateVector::boltzmann(1.0, &spec).unwrap();
    let dt = perfect_time_step(0.75, 15).unwrap();
    let n_seeds = 20u64;

    struct SeedOutcome {
        late_ground_err: f64,
        crossing: [Option<usize>; 5],
        best_err_after_crossing: [f64; 5],
    }
    let outcomes: Vec<SeedOutcome> = (0..n_seeds)
        .into_par_iter()
        .map(|seed| {
            let prop = Propagator::exact_eigen(spec.clone(), dt);
            let trace = convergence_trace(
                &prop,
                &psi,
                TraceMatrices::HermitianToeplitz { spectrum: &spec },
                &SolverConfig::hermitian(s_sv, dt),
                580,
                &TraceOptions {
                    stride: 13,
                    noise: Some(NoiseSpec::element(eps, seed).unwrap()),
                    stop_at: None,
                },
            )
            .unwrap();
            let mut crossing = [None; 5];
            let mut best = [f64::INFINITY; 5];
            for entry in &trace {
                for k in 1..=5usize {
                    if entry.estimate.n_svd >= k {
                        if crossing[k - 1].is_none() {
                            crossing[k - 1] = Some(entry.n_t);
                        }
                        let err =
                            relative_error(entry.estimate.eigenvalues[k - 1], exact[k - 1]);
                        if err < best[k - 1] {
                            best[k - 1] = err;
                        }
                    }
                }
            }
            SeedOutcome {
                late_ground_err: relative_error(
                    trace.last().unwrap().estimate.ground(),
                    0.0,
                ),
                crossing,
                best_err_after_crossing: best,
            }
        })
        .collect();

    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let med_ground = median(outcomes.iter().map(|o| o.late_ground_err).collect());
    assert!(
        med_ground < eps,
        "median converged ground error {med_ground:.3e} >= {eps}"
    );
    for k in 1..=5usize {
        let n_crossed = outcomes.iter().filter(|o| o.crossing[k - 1].is_some()).count();
        assert!(
            n_crossed as u64 == n_seeds,
            "singular value {k} crossed s_sv in only {n_crossed}/{n_seeds} seeds"
        );
        let med_best = median(
            outcomes
                .iter()
                .map(|o| o.best_err_after_crossing[k - 1])
                .collect(),
        );
        assert!(
            med_best < 10.0 * eps,
            "level {k}: median best error after crossing {med_best:.3e} >= 10 eps"
        );
    }

    // fine-spacing configuration: huge condition number, accurate solve
    let spec_fine = build_linear_spectrum(0.05, 20).unwrap().spectrum();
    let psi_fine = StateVector::boltzmann(10.0, &spec_fine).unwrap();
    let dt_fine = perfect_time_step(0.05, 19).unwrap();
    let prop_fine = Propagator::exact_eigen(spec_fine.clone(), dt_fine);
    let trace_fine = convergence_trace(
        &prop_fine,
        &psi_fine,
        TraceMatrices::HermitianToeplitz { spectrum: &spec_fine },
        &SolverConfig::hermitian(1e-1, dt_fine),
        300,
        &TraceOptions {
            stride: 15,
            noise: Some(NoiseSpec::toeplitz(1e-3, 7).unwrap()),
            stop_at: None,
        },
    )
    .unwrap();
    let last_fine = trace_fine.last().unwrap();
    let cond = last_fine.estimate.condition_number;
    let err_fine = relative_error(last_fine.estimate.ground(), 0.0);
    assert!(cond > 1e3, "condition number {cond:.3e} not > 1e3");
    assert!(err_fine < 1e-3, "fine-spacing ground error {err_fine:.3e} not < eps");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:.2?}");
    println!(
        "acceptance 06 noise_resilience: PASS (median ground err {med_ground:.2e}, \
         all 5 crossings, fine-spacing cond {cond:.2e} with err {err_fine:.2e}, {elapsed:.1?})"
    );
}

/// Criterion 7 — Hadamard-test shot scaling: stderr against shots fits a
/// -1/2 power law.
#[test]
fn c07_shot_scaling() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let g = Complex64::new(0.6, 0.25);
    let n_seeds = 200u64;
    let mut points = Vec::new();
    for &shots in &[100u64, 1_000, 10_000, 100_000] {
        let estimates: Vec<f64> = (0..n_seeds)
            .into_par_iter()
            .map(|seed| hadamard_test(g, shots, 1000 + seed).unwrap().value.re)
            .collect();
        let mean: f64 = estimates.iter().sum::<f64>() / n_seeds as f64;
        let var: f64 =
            estimates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n_seeds - 1) as f64;
        points.push((shots as f64, var.sqrt()));
    }
    let slope = log_log_slope(&points);
    let elapsed = start.elapsed();
    assert!(
        (-0.55..=-0.45).contains(&slope),
        "stderr slope {slope:.4} outside -0.5 +- 0.05"
    );
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:.2?}");
    println!("acceptance 07 shot_scaling: PASS (slope {slope:.3}, {elapsed:.1?})");
}

/// Criterion 8 — randomized-grid cancellation: the mean residual decays like
/// the square-root envelope and falls with the pair gap.
#[test]
fn c08_random_grid_decay() {
    let _guard = heavy_lock();
    let start = Instant::now();
    let n_ts = [8usize, 16, 32, 64, 128, 256, 512];
    let stats = random_grid_experiment(0.05, 0.5, &n_ts, 300, 2024, OmegaMode::PerPoint).unwrap();
    let points: Vec<(f64, f64)> = stats
        .iter()
        .map(|s| (s.n_t as f64, s.mean_residual))
        .collect();
    let slope = log_log_slope(&points);
    assert!(
        (-0.65..=-0.35).contains(&slope),
        "decay exponent {slope:.4} outside [-0.65, -0.35]"
    );

    // gap monotonicity at fixed delta_e_min (common random numbers)
    let mut means = Vec::new();
    for gap in [0.05, 0.1, 0.2] {
        let s = random_grid_experiment(0.05, gap, &[16], 300, 99, OmegaMode::PerPoint).unwrap();
        means.push(s[0].mean_residual);
    }
    assert!(
        means[0] > means[1] && means[1] > means[2],
        "gap trend not monotone: {means:?}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:.2?}");
    println!(
        "acceptance 08 random_grid_decay: PASS (exponent {slope:.3}, gap means {means:?}, {elapsed:.1?})"
    );
}

fn random_pauli_hamiltonian(seed: u64, n_qubits: usize) -> PauliSumHamiltonian {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n_terms = rng.random_range(3..=6);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        let ops: Vec<Pauli> = (0..n_qubits)
            .map(|_| match rng.random_range(0..4) {
                0 => Pauli::I,
                1 => Pauli::X,
                2 => Pauli::Y,
                _ => Pauli::Z,
            })
            .collect();
        let coeff: f64 = rng.random_range(-1.0..1.0);
        terms.push((coeff, PauliString::new(ops).unwrap()));
    }
    PauliSumHamiltonian::new(n_qubits, terms).unwrap()
}

fn operator_norm(m: &CMat) -> f64 {
    let svd = m.svd().unwrap();
    svd.S().column_vector()[0].re
}

/// Criterion 9 — the commutator bound really bounds the symmetric-Trotter
/// error, and the Pauli-algebra support set matches dense commutators.
#[test]
fn c09_gamma_bound_validity() {
    let _guard = heavy_lock();
    let start = Instant::now();
    for i in 0..10u64 {
        let n_qubits = 3 + (i % 2) as usize; // 3 and 4 qubits
        let h = random_pauli_hamiltonian(500 + i, n_qubits);
        let bound = gamma_bound(&h);
        let spec = diagonalize(&h.to_dense().unwrap()).unwrap();
        let dim = 1 << n_qubits;
        for &t in &[0.1f64, 0.05] {
            // exact unitary from the eigendecomposition
            let mut u_exact = CMat::zeros(dim, dim);
            for n in 0..dim {
                let phase = Complex64::from_polar(1.0, -spec.energies()[n] * t);
                for r in 0..dim {
                    for c in 0..dim {
                        u_exact[(r, c)] += spec.eigenvectors()[(r, n)]
                            * phase
                            * spec.eigenvectors()[(c, n)].conj();
                    }
                }
            }
            let u_ts = symmetric_trotter_unitary(&h, t).unwrap();
            let diff = &u_ts - &u_exact;
            let err = operator_norm(&diff);
            let cap = bound.gamma.powi(3) * t.powi(3) + 1e-12;
            assert!(
                err <= cap,
                "ham {i}, t {t}: error {err:.6e} exceeds bound {cap:.6e}"
            );
        }

        // Pauli-algebra membership vs dense commutators on every tuple
        let terms = h.terms();
        let dense: Vec<CMat> = terms.iter().map(|(_, s)| s.dense_matrix()).collect();
        let comm = |a: &CMat, b: &CMat| -> CMat { a * b - b * a };
        for j in 0..terms.len() {
            for p in 0..terms.len() {
                for q in 0..terms.len() {
                    let inner_zero = terms[p].1.commutes_with(&terms[j].1);
                    let pauli_member = if inner_zero {
                        false
                    } else {
                        let (_, prod) = terms[p].1.product(&terms[j].1);
                        !terms[q].1.commutes_with(&prod)
                    };
                    let nested = comm(&dense[q], &comm(&dense[p], &dense[j]));
                    let dense_member = operator_norm(&nested) > 1e-9;
                    assert_eq!(
                        pauli_member, dense_member,
                        "membership mismatch at ({q},{p},{j}) in ham {i}"
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:.2?}");
    println!("acceptance 09 gamma_bound_validity: PASS ({elapsed:.1?})");
}

/// Criterion 10 — resource formulas against hand-evaluated closed forms from
/// the golden TFIM(2,1,2) commutator bound (Gamma^3 = 12).
#[test]
fn c10_resource_spot_checks() {
    assert_eq!(holevo_uncertainty(1).unwrap(), std::f64::consts::PI / 4.0);
    assert_eq!(holevo_uncertainty(4).unwrap(), std::f64::consts::PI / 32.0);

    let h = build_tfim(2, 1.0, 2.0).unwrap();
    let bound = gamma_bound(&h);
    let gamma_golden = 12.0f64.cbrt();
    assert!((bound.gamma - gamma_golden).abs() < 1e-12);
    assert_eq!(bound.triple_count, 6);

    // hand-evaluated chain at eps = 1e-3, literal arithmetic
    let eps = 1e-3;
    let two_sqrt2_pi = 2.0 * 2.0f64.sqrt() * std::f64::consts::PI;
    let t_hand = (1.0 / 12.0f64.sqrt()) * (eps / two_sqrt2_pi).sqrt();
    let m_hand = (-0.5 + (2.0 * std::f64::consts::PI / (eps * t_hand)).log2()).ceil();
    let n_exp_hand = 2.0 * 3.0 * (two_sqrt2_pi * gamma_golden / eps).powf(1.5);
    let (t, m_raw, n_exp) = qpe_closed_forms(eps, 3, gamma_golden);
    assert!((t - t_hand).abs() < 1e-15);
    assert!((m_raw.ceil() - m_hand).abs() < 1e-12);
    assert!((n_exp - n_exp_hand).abs() / n_exp_hand < 1e-12);

    let report = qpe_resources(eps, &h, 0.5).unwrap();
    assert_eq!(report.m_ancillae, m_hand as u32);
    assert!((report.trotter_step - t_hand).abs() < 1e-15);
    assert!((report.n_exp_qpe.unwrap() - n_exp_hand / 0.5).abs() / n_exp_hand < 1e-12);

    // VQPE bounds: Sum|alpha| = 5, M = 3, n_t = 20, t_max = 1, |S^-1| = 2
    let (s_hand, h_hand, tot_hand) = (
        20.0f64.powf(4.5) * 3.0 * gamma_golden.powf(1.5) / eps.powf(2.5),
        20.0f64.powf(4.5) * 3.0 * 25.0 * gamma_golden.powf(1.5) / eps.powf(2.5),
        3.0 * (20.0 * 5.0f64).powf(4.5) * 32.0 * gamma_golden.powf(1.5) / eps.powf(2.5),
    );
    let (s, hh, tot) = vqpe_closed_forms(eps, 3, 5.0, gamma_golden, 20, 2.0);
    assert!((s - s_hand).abs() / s_hand < 1e-12);
    assert!((hh - h_hand).abs() / h_hand < 1e-12);
    assert!((tot - tot_hand).abs() / tot_hand < 1e-12);
    let v = vqpe_resources(eps, &h, 20, 1.0, 2.0).unwrap();
    assert!((v.n_exp_vqpe_total.unwrap() - tot_hand).abs() / tot_hand < 1e-12);

    println!(
        "acceptance 10 resource_spot_checks: PASS (Gamma^3 = {:.1}, m = {m_hand}, \
         N_exp = {n_exp_hand:.3e})",
        bound.gamma.powi(3)
    );
}

/// Criterion 11a — the externally quoted product-reference target of
/// 0.014 +- 0.001. Under the sign convention this crate pins, the measured
/// ground weight is 0.0774 (see c11_product_reference_measured_weight), so
/// this assertion records the discrepancy honestly; details in the README.
#[test]
fn c11a_product_reference_weight_as_specified() {
    let spec = tfim10_spectrum();
    let psi = StateVector::product(0.979, 0.205, 10).unwrap();
    let sup = support_space(&psi, spec, 1e-6).unwrap();
    let ground_weight = sup
        .entries()
        .iter()
        .find(|(n, _)| *n == 0)
        .map(|(_, w)| *w)
        .unwrap_or(0.0);
    assert!(
        (ground_weight - 0.014).abs() <= 0.001,
        "ground-state weight {ground_weight:.6} is not 0.014 +- 0.001; \
         the convention-consistent value is 0.0774 (see the README note)"
    );
    println!("acceptance 11a product_reference_weight: PASS ({ground_weight:.4})");
}

/// Criterion 11a companion — the measured ground weight under the pinned
/// Hamiltonian convention, frozen from the pre-build dense oracle.
#[test]
fn c11_product_reference_measured_weight() {
    let spec = tfim10_spectrum();
    let psi = StateVector::product(0.979, 0.205, 10).unwrap();
    let sup = support_space(&psi, spec, 1e-6).unwrap();
    let ground_weight = sup
        .entries()
        .iter()
        .find(|(n, _)| *n == 0)
        .map(|(_, w)| *w)
        .unwrap();
    assert!(
        (ground_weight - 0.077384).abs() < 1e-4,
        "measured ground weight drifted: {ground_weight:.6}"
    );
    println!(
        "acceptance 11 product_reference_measured_weight: PASS ({ground_weight:.6})"
    );
}

/// Criterion 11b — Boltzmann support count against the closed form
/// `ceil(-ln(s_sv)/(2 beta dE)) - 1`: the largest retained level under
/// ground-relative weight thresholding.
#[test]
fn c11b_boltzmann_support_closed_form() {
    let spec = build_linear_spectrum(0.75, 16).unwrap().spectrum();
    let psi = StateVector::boltzmann(1.0, &spec).unwrap();
    let w0 = support_space(&psi, &spec, 1e-15)
        .unwrap()
        .entries()[0]
        .1;
    for s_sv in [1e-2, 1e-4, 1e-8] {
        let bound = boltzmann_support_bound(s_sv, 1.0, 0.75).unwrap();
        // threshold the weights relative to the ground weight
        let sup = support_space(&psi, &spec, s_sv * w0).unwrap();
        assert_eq!(
            sup.max_level().unwrap(),
            bound,
            "s_sv = {s_sv}: max level {:?} vs closed form {bound}",
            sup.max_level()
        );
        assert_eq!(sup.q(), bound + 1);
    }
    println!("acceptance 11b boltzmann_support_closed_form: PASS (bounds 3, 6, 12)");
}

/// Criterion 12 — molecular figures are not reproducible (external chemistry
/// Hamiltonians absent); the substituted checkable property: larger SVD
/// cutoffs take at least as long to reach the accuracy target on the model
/// system (the exact-extraction and noise properties live in c01 and c06).
#[test]
fn c12_timestep_monotone_substitute() {
    let _guard = heavy_lock();
    let spec = build_linear_spectrum(0.75, 16).unwrap().spectrum();
    let psi = StateVector::boltzmann(1.0, &spec).unwrap();
    let dt = 0.2;
    let target = 1.6e-3;
    let prop = Propagator::exact_eigen(spec.clone(), dt);
    let mut times = Vec::new();
    for s_sv in [1e-10, 1e-6, 1e-2] {
        let trace = convergence_trace(
            &prop,
            &psi,
            TraceMatrices::HermitianToeplitz { spectrum: &spec },
            &SolverConfig::hermitian(s_sv, dt),
            200,
            &TraceOptions::default(),
        )
        .unwrap();
        let hit = trace
            .iter()
            .find(|e| relative_error(e.estimate.ground(), 0.0) < target)
            .unwrap_or_else(|| panic!("never reached target at s_sv {s_sv}"));
        times.push(hit.total_time);
    }
    assert!(
        times[0] <= times[1] + 1e-12 && times[1] <= times[2] + 1e-12,
        "time-to-accuracy not monotone in s_sv: {times:?}"
    );
    println!(
        "acceptance 12 timestep_monotone_substitute: PASS (times {times:?})"
    );
}
