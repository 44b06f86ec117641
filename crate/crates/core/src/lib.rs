//! Classical laboratory for variational quantum phase estimation (VQPE).
//!
//! The crate generates real-time-evolved expansion states for model and
//! file-supplied Hamiltonians, assembles the Toeplitz overlap / Hamiltonian /
//! time-evolution matrices from an autocorrelation generator, and solves the
//! SVD-regularized generalized eigenvalue problem in both the Hermitian and
//! the unitary formulation. On top of that sit diagnostics: phase-cancellation
//! residuals and time-grid heuristics, Gaussian and shot-noise models for the
//! measured matrices, and resource-cost formulas comparing textbook phase
//! estimation against the real-time subspace approach.
//!
//! Matrices are `faer::Mat<Complex64>` throughout, aliased as [`CMat`].

pub mod error;
pub mod evolution;
pub mod gevp;
pub mod hamiltonian;
pub mod noise;
pub mod overlap;
pub mod pcc;
pub mod qpe;
pub mod timestep;
pub mod trace;

pub use error::{Result, VqpeError};

use num_complex::Complex64;

/// Dense complex matrix type used for all assembled operators.
pub type CMat = faer::Mat<Complex64>;

pub use evolution::{evolve_exact, evolve_lanczos, evolved_sequence, trotter1_step, Propagator};
pub use gevp::{
    condition_number, solve_gevp, solve_unitary_gevp, Formulation, SolverConfig, SpectrumEstimate,
};
pub use hamiltonian::{
    boltzmann_support_bound, build_linear_spectrum, build_tfim, diagonalize, load_hamiltonian,
    support_space, DenseHermitianMatrix, DiagonalHamiltonian, Pauli, PauliString,
    PauliSumHamiltonian, Spectrum, StateVector, SupportSpace,
};
pub use noise::{hadamard_test, sampled_overlap_generator, HadamardEstimate, NoiseMode, NoiseSpec};
pub use overlap::{
    assemble_h_full, assemble_h_toeplitz, assemble_s, assemble_u, exact_generator,
    measure_overlap_generator, KrylovMatrices, OverlapGenerator, TimeGrid,
};
pub use pcc::{pcc_residual, perfect_time_step, phase_circle, random_grid_experiment, PccReport};
pub use qpe::{gamma_bound, holevo_uncertainty, qpe_resources, vqpe_resources, TrotterBound};
pub use timestep::{detect_steps, minimal_time_step, refine_time_step, StepReport};
pub use trace::{convergence_trace, TraceEntry, TraceMatrices, TraceOptions};
