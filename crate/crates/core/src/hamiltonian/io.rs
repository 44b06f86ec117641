use std::collections::HashMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VqpeError};
use crate::CMat;

use super::{
    diagonalize, DenseHermitianMatrix, DiagonalHamiltonian, PauliString, PauliSumHamiltonian,
    Spectrum,
};

/// On-disk Hamiltonian schema, discriminated by the `kind` field.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HamiltonianFile {
    Diagonal {
        energies: Vec<f64>,
    },
    Pauli {
        n_qubits: usize,
        terms: Vec<PauliTermSpec>,
    },
    /// Sparse triplets `[row, col, re, im]`; only the upper triangle is
    /// required, the lower is filled by conjugation.
    Dense {
        dim: usize,
        triplets: Vec<(usize, usize, f64, f64)>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTermSpec {
    pub coeff: f64,
    pub string: String,
}

/// A Hamiltonian ingested from disk, in whichever representation the file
/// declared.
#[derive(Debug, Clone)]
pub enum LoadedHamiltonian {
    Diagonal(DiagonalHamiltonian),
    Pauli(PauliSumHamiltonian),
    Dense(DenseHermitianMatrix),
}

impl LoadedHamiltonian {
    pub fn dimension(&self) -> usize {
        match self {
            LoadedHamiltonian::Diagonal(h) => h.dimension(),
            LoadedHamiltonian::Pauli(h) => h.dimension(),
            LoadedHamiltonian::Dense(h) => h.dimension(),
        }
    }

    /// Exact spectrum, going dense when needed (subject to `cap`).
    pub fn spectrum_capped(&self, cap: usize) -> Result<Spectrum> {
        match self {
            LoadedHamiltonian::Diagonal(h) => Ok(h.spectrum()),
            LoadedHamiltonian::Pauli(h) => diagonalize(&h.to_dense_capped(cap)?),
            LoadedHamiltonian::Dense(h) => {
                if h.dimension() > cap {
                    return Err(VqpeError::ResourceLimit(format!(
                        "dimension {} exceeds cap {cap}",
                        h.dimension()
                    )));
                }
                diagonalize(h)
            }
        }
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        self.spectrum_capped(super::DEFAULT_DENSE_CAP)
    }
}

/// Load a Hamiltonian JSON file, validating the representation invariants.
pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<LoadedHamiltonian> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let file: HamiltonianFile = serde_json::from_str(&text).map_err(|e| VqpeError::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    realize(file).map_err(|e| match e {
        VqpeError::Validation(d) | VqpeError::InvalidArgument(d) => VqpeError::Parse {
            path: path.display().to_string(),
            detail: d,
        },
        other => other,
    })
}

fn realize(file: HamiltonianFile) -> Result<LoadedHamiltonian> {
    match file {
        HamiltonianFile::Diagonal { mut energies } => {
            energies.sort_by(f64::total_cmp);
            Ok(LoadedHamiltonian::Diagonal(DiagonalHamiltonian::new(
                energies,
            )?))
        }
        HamiltonianFile::Pauli { n_qubits, terms } => {
            let mut parsed = Vec::with_capacity(terms.len());
            for (i, t) in terms.iter().enumerate() {
                let string = PauliString::parse(&t.string)
                    .map_err(|e| VqpeError::Validation(format!("terms[{i}].string: {e}")))?;
                if string.n_qubits() != n_qubits {
                    return Err(VqpeError::Validation(format!(
                        "terms[{i}].string has {} letters, expected n_qubits = {n_qubits}",
                        string.n_qubits()
                    )));
                }
                parsed.push((t.coeff, string));
            }
            Ok(LoadedHamiltonian::Pauli(PauliSumHamiltonian::new(
                n_qubits, parsed,
            )?))
        }
        HamiltonianFile::Dense { dim, triplets } => {
            if dim == 0 {
                return Err(VqpeError::Validation("dense dim must be >= 1".into()));
            }
            // Canonicalize every triplet to its upper-triangle representative
            // and reject conflicting duplicates.
            let mut seen: HashMap<(usize, usize), Complex64> = HashMap::new();
            for (i, &(r, c, re, im)) in triplets.iter().enumerate() {
                if r >= dim || c >= dim {
                    return Err(VqpeError::Validation(format!(
                        "triplets[{i}] index ({r},{c}) out of range for dim {dim}"
                    )));
                }
                let v = Complex64::new(re, im);
                if r == c && im.abs() > 1e-12 {
                    return Err(VqpeError::Validation(format!(
                        "triplets[{i}]: diagonal entry ({r},{r}) must be real, got imag {im}"
                    )));
                }
                let (key, canon) = if r <= c { ((r, c), v) } else { ((c, r), v.conj()) };
                if let Some(prev) = seen.insert(key, canon) {
                    if (prev - canon).norm() > 1e-12 {
                        return Err(VqpeError::Validation(format!(
                            "triplets[{i}]: entry ({r},{c}) conflicts with an earlier triplet \
                             (non-Hermitian input)"
                        )));
                    }
                }
            }
            let mut mat = CMat::zeros(dim, dim);
            for (&(r, c), &v) in &seen {
                mat[(r, c)] = v;
                mat[(c, r)] = v.conj();
            }
            Ok(LoadedHamiltonian::Dense(DenseHermitianMatrix::new(mat)?))
        }
    }
}
