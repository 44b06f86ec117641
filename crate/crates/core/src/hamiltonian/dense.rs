use faer::Side;
use num_complex::Complex64;

use crate::error::{Result, VqpeError};
use crate::CMat;

use super::{DiagonalHamiltonian, PauliSumHamiltonian};

/// Default cap on the dense Hilbert-space dimension (2^14). Larger systems
/// must stay on the Pauli/diagonal paths with Lanczos propagation.
pub const DEFAULT_DENSE_CAP: usize = 1 << 14;

/// Dense Hermitian matrix, validated to equal its conjugate transpose
/// elementwise within 1e-12.
#[derive(Debug, Clone)]
pub struct DenseHermitianMatrix {
    mat: CMat,
}

impl DenseHermitianMatrix {
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(VqpeError::InvalidArgument(format!(
                "matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        for i in 0..mat.nrows() {
            for j in 0..=i {
                let d = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if d > 1e-12 {
                    return Err(VqpeError::Validation(format!(
                        "matrix is not Hermitian: |H[{i},{j}] - conj(H[{j},{i}])| = {d:.3e}"
                    )));
                }
            }
        }
        Ok(Self { mat })
    }

    pub fn dimension(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }
}

impl PauliSumHamiltonian {
    /// Expand the Pauli sum into a dense matrix. Fails when 2^n exceeds `cap`.
    pub fn to_dense_capped(&self, cap: usize) -> Result<DenseHermitianMatrix> {
        let dim = 1usize
            .checked_shl(self.n_qubits() as u32)
            .filter(|&d| d <= cap)
            .ok_or_else(|| {
                VqpeError::ResourceLimit(format!(
                    "dense dimension 2^{} exceeds cap {cap}",
                    self.n_qubits()
                ))
            })?;
        let mut mat = CMat::zeros(dim, dim);
        for (coeff, string) in self.terms() {
            let x = string.x_mask();
            for b in 0..dim as u64 {
                let phase = string.basis_phase(b);
                mat[((b ^ x) as usize, b as usize)] += phase * *coeff;
            }
        }
        DenseHermitianMatrix::new(mat)
    }

    pub fn to_dense(&self) -> Result<DenseHermitianMatrix> {
        self.to_dense_capped(DEFAULT_DENSE_CAP)
    }
}

impl DiagonalHamiltonian {
    pub fn to_dense(&self) -> Result<DenseHermitianMatrix> {
        let dim = self.dimension();
        if dim > DEFAULT_DENSE_CAP {
            return Err(VqpeError::ResourceLimit(format!(
                "dimension {dim} exceeds dense cap {DEFAULT_DENSE_CAP}"
            )));
        }
        let mut mat = CMat::zeros(dim, dim);
        for (n, e) in self.energies().iter().enumerate() {
            mat[(n, n)] = Complex64::new(*e, 0.0);
        }
        DenseHermitianMatrix::new(mat)
    }
}

/// Eigendecomposition of a Hamiltonian: ascending energies, orthonormal
/// eigenvector columns, and the smallest gap between consecutive distinct
/// levels (infinite when the spectrum has a single distinct level).
#[derive(Debug, Clone)]
pub struct Spectrum {
    energies: Vec<f64>,
    eigenvectors: CMat,
    min_gap: f64,
}

impl Spectrum {
    fn from_parts(energies: Vec<f64>, eigenvectors: CMat) -> Self {
        let min_gap = energies
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|g| *g > 1e-12)
            .fold(f64::INFINITY, f64::min);
        Self {
            energies,
            eigenvectors,
            min_gap,
        }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// Eigenvector columns in the computational basis.
    pub fn eigenvectors(&self) -> &CMat {
        &self.eigenvectors
    }

    pub fn dimension(&self) -> usize {
        self.energies.len()
    }

    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// True when the eigenvectors are exactly the standard basis (diagonal
    /// Hamiltonian input), enabling O(D) evolution.
    pub(crate) fn has_identity_eigenvectors(&self) -> bool {
        let d = self.dimension();
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (self.eigenvectors[(i, j)] - Complex64::new(expect, 0.0)).norm() != 0.0 {
                    return false;
                }
            }
        }
        true
    }
}

/// Exact diagonalization of a dense Hermitian matrix.
pub fn diagonalize(h: &DenseHermitianMatrix) -> Result<Spectrum> {
    let evd = h
        .matrix()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| VqpeError::NumericalFailure(format!("eigensolver failed: {e:?}")))?;
    let dim = h.dimension();
    let mut order: Vec<usize> = (0..dim).collect();
    let raw: Vec<f64> = (0..dim).map(|i| evd.S().column_vector()[i].re).collect();
    // Ascending with ties broken by original index.
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]).then(a.cmp(&b)));
    let energies: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let vectors = CMat::from_fn(dim, dim, |i, j| evd.U()[(i, order[j])]);
    Ok(Spectrum::from_parts(energies, vectors))
}

impl DiagonalHamiltonian {
    /// Spectrum with standard-basis eigenvectors.
    pub fn spectrum(&self) -> Spectrum {
        let dim = self.dimension();
        Spectrum::from_parts(self.energies().to_vec(), CMat::identity(dim, dim))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_linear_spectrum, build_tfim};

    #[test]
    fn single_x_term_dense() {
        let h = crate::hamiltonian::PauliSumHamiltonian::new(
            1,
            vec![(-2.0, crate::hamiltonian::PauliString::parse("X").unwrap())],
        )
        .unwrap();
        let d = h.to_dense().unwrap();
        assert_eq!(d.matrix()[(0, 1)], Complex64::new(-2.0, 0.0));
        assert_eq!(d.matrix()[(1, 0)], Complex64::new(-2.0, 0.0));
        assert_eq!(d.matrix()[(0, 0)], Complex64::new(0.0, 0.0));
        let spec = diagonalize(&d).unwrap();
        assert!((spec.energies()[0] + 2.0).abs() < 1e-12);
        assert!((spec.energies()[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tfim2_dense_layout() {
        let d = build_tfim(2, 1.0, 2.0).unwrap().to_dense().unwrap();
        let m = d.matrix();
        // ZZ part on the diagonal
        for (i, want) in [-1.0, 1.0, 1.0, -1.0].into_iter().enumerate() {
            assert!((m[(i, i)] - Complex64::new(want, 0.0)).norm() < 1e-14);
        }
        // X parts off the diagonal
        assert_eq!(m[(0, 1)], Complex64::new(-2.0, 0.0));
        assert_eq!(m[(0, 2)], Complex64::new(-2.0, 0.0));
        assert_eq!(m[(1, 3)], Complex64::new(-2.0, 0.0));
        assert_eq!(m[(0, 3)], Complex64::new(0.0, 0.0));
        // Ground energy is -sqrt(17), frozen from the pre-build dense oracle.
        let spec = diagonalize(&d).unwrap();
        assert!((spec.ground_energy() + 17.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn diagonal_roundtrip_and_min_gap() {
        let h = build_linear_spectrum(0.75, 16).unwrap();
        let spec = diagonalize(&h.to_dense().unwrap()).unwrap();
        for (a, b) in spec.energies().iter().zip(h.energies()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((spec.min_gap() - 0.75).abs() < 1e-12);
        assert!(h.spectrum().has_identity_eigenvectors());
    }

    #[test]
    fn eigenvector_residuals() {
        let d = build_tfim(3, 1.0, 2.0).unwrap().to_dense().unwrap();
        let spec = diagonalize(&d).unwrap();
        let m = d.matrix();
        for n in 0..spec.dimension() {
            let mut res: f64 = 0.0;
            for i in 0..spec.dimension() {
                let mut hv = Complex64::new(0.0, 0.0);
                for j in 0..spec.dimension() {
                    hv += m[(i, j)] * spec.eigenvectors()[(j, n)];
                }
                res += (hv - spec.eigenvectors()[(i, n)] * spec.energies()[n]).norm_sqr();
            }
            assert!(res.sqrt() < 1e-10);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        m[(1, 0)] = Complex64::new(2.0, 0.0);
        assert!(DenseHermitianMatrix::new(m).is_err());
    }

    #[test]
    fn dense_cap_enforced() {
        let h = build_tfim(4, 1.0, 2.0).unwrap();
        assert!(matches!(
            h.to_dense_capped(8),
            Err(VqpeError::ResourceLimit(_))
        ));
    }
}
