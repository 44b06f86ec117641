//! Hamiltonian representations, reference states, and exact diagonalization.
//!
//! Three interchangeable representations are supported: an explicit diagonal
//! spectrum, a real-coefficient Pauli sum, and a dense Hermitian matrix.
//! Model builders cover the linear spectrum used throughout the harmonic
//! studies and the open-boundary transverse-field Ising chain.

mod dense;
mod io;
mod pauli;
mod state;

pub use dense::{diagonalize, DenseHermitianMatrix, Spectrum, DEFAULT_DENSE_CAP};
pub use io::{load_hamiltonian, LoadedHamiltonian};
pub use pauli::{Pauli, PauliString, PauliSumHamiltonian};
pub use state::{
    boltzmann_support_bound, support_space, ReferenceKind, StateVector, SupportSpace,
};

use crate::error::{Result, VqpeError};

/// Hamiltonian given directly by its (ascending) eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    energies: Vec<f64>,
}

impl DiagonalHamiltonian {
    /// Energies must be sorted ascending and non-empty.
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(VqpeError::InvalidArgument(
                "diagonal Hamiltonian needs at least one level".into(),
            ));
        }
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(VqpeError::InvalidArgument(
                "diagonal energies must be sorted ascending".into(),
            ));
        }
        Ok(Self { energies })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dimension(&self) -> usize {
        self.energies.len()
    }
}

/// Equally spaced spectrum `E_N = N * delta_e`, `N = 0..dimension-1`.
pub fn build_linear_spectrum(delta_e: f64, dimension: usize) -> Result<DiagonalHamiltonian> {
    if !delta_e.is_finite() || delta_e <= 0.0 {
        return Err(VqpeError::InvalidArgument(format!(
            "delta_e must be positive, got {delta_e}"
        )));
    }
    if dimension == 0 {
        return Err(VqpeError::InvalidArgument("dimension must be >= 1".into()));
    }
    DiagonalHamiltonian::new((0..dimension).map(|n| n as f64 * delta_e).collect())
}

/// Open-boundary transverse-field Ising chain,
/// `H = -J (sum_i Z_i Z_{i+1} + h sum_i X_i)`.
///
/// Term order is canonical: all ZZ couplings in ascending site order, then all
/// X fields in ascending site order. Trotterization follows this order.
pub fn build_tfim(n_sites: usize, j_coupling: f64, h_field: f64) -> Result<PauliSumHamiltonian> {
    if n_sites == 0 {
        return Err(VqpeError::InvalidArgument("n_sites must be >= 1".into()));
    }
    let mut terms = Vec::with_capacity(2 * n_sites - 1);
    for i in 0..n_sites.saturating_sub(1) {
        let mut ops = vec![Pauli::I; n_sites];
        ops[i] = Pauli::Z;
        ops[i + 1] = Pauli::Z;
        terms.push((-j_coupling, PauliString::new(ops)?));
    }
    for i in 0..n_sites {
        let mut ops = vec![Pauli::I; n_sites];
        ops[i] = Pauli::X;
        terms.push((-j_coupling * h_field, PauliString::new(ops)?));
    }
    PauliSumHamiltonian::new(n_sites, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_spectrum_matches_formula() {
        let h = build_linear_spectrum(0.75, 16).unwrap();
        assert_eq!(h.dimension(), 16);
        for (n, e) in h.energies().iter().enumerate() {
            assert_eq!(*e, n as f64 * 0.75);
        }
        let h = build_linear_spectrum(0.05, 20).unwrap();
        assert!((h.energies()[19] - 0.95).abs() < 1e-15);
        let h = build_linear_spectrum(1.0, 1).unwrap();
        assert_eq!(h.energies(), &[0.0]);
    }

    #[test]
    fn linear_spectrum_rejects_bad_args() {
        assert!(build_linear_spectrum(0.0, 4).is_err());
        assert!(build_linear_spectrum(-1.0, 4).is_err());
        assert!(build_linear_spectrum(1.0, 0).is_err());
    }

    #[test]
    fn tfim_terms_and_signs() {
        let h = build_tfim(2, 1.0, 2.0).unwrap();
        let terms = h.terms();
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[0].0, -1.0);
        assert_eq!(terms[0].1.to_string(), "ZZ");
        assert_eq!(terms[1].0, -2.0);
        assert_eq!(terms[1].1.to_string(), "XI");
        assert_eq!(terms[2].0, -2.0);
        assert_eq!(terms[2].1.to_string(), "IX");

        let h1 = build_tfim(1, 1.0, 2.0).unwrap();
        assert_eq!(h1.terms().len(), 1);
        assert_eq!(h1.terms()[0].0, -2.0);

        let h10 = build_tfim(10, 1.0, 2.0).unwrap();
        assert_eq!(h10.terms().len(), 19);
        assert_eq!(
            h10.terms().iter().filter(|(_, p)| p.weight() == 2).count(),
            9
        );
    }
}
