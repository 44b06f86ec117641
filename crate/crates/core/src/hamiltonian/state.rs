use num_complex::Complex64;

use crate::error::{Result, VqpeError};

use super::Spectrum;

/// Normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Accepts amplitudes already normalized within 1e-12.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(VqpeError::Validation(format!(
                "state norm {n} deviates from 1 beyond 1e-12"
            )));
        }
        Ok(Self { amps })
    }

    /// Normalizes the amplitudes; fails on the zero vector.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(VqpeError::InvalidArgument(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        for a in &mut amps {
            *a /= n;
        }
        Ok(Self { amps })
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Computational basis state `|k>`.
    pub fn basis(index: usize, dimension: usize) -> Result<Self> {
        if index >= dimension {
            return Err(VqpeError::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dimension}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dimension];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Thermal-weighted reference `(sum_N e^{-2 beta E_N})^{-1/2} sum_N
    /// e^{-beta E_N} |N>`, expressed in the computational basis through the
    /// spectrum's eigenvectors.
    pub fn boltzmann(beta: f64, spectrum: &Spectrum) -> Result<Self> {
        if !beta.is_finite() {
            return Err(VqpeError::InvalidArgument("beta must be finite".into()));
        }
        let e0 = spectrum.ground_energy();
        let dim = spectrum.dimension();
        // Shift by E0 so the weights stay representable for any spectrum.
        let coeff: Vec<f64> = spectrum
            .energies()
            .iter()
            .map(|e| (-beta * (e - e0)).exp())
            .collect();
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for (n, c) in coeff.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            for (i, amp) in amps.iter_mut().enumerate() {
                *amp += spectrum.eigenvectors()[(i, n)] * *c;
            }
        }
        Self::normalized(amps)
    }

    /// Uniform product state `|phi>^{tensor n}` with `phi = a|0> + b|1>`;
    /// `(a, b)` is normalized first.
    pub fn product(a: f64, b: f64, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 30 {
            return Err(VqpeError::InvalidArgument(format!(
                "product reference supports 1..=30 qubits, got {n_qubits}"
            )));
        }
        let norm = a.hypot(b);
        if norm == 0.0 || !norm.is_finite() {
            return Err(VqpeError::InvalidArgument(
                "product amplitudes must not both vanish".into(),
            ));
        }
        let (a, b) = (a / norm, b / norm);
        let dim = 1usize << n_qubits;
        let mut amps = Vec::with_capacity(dim);
        for idx in 0..dim {
            let ones = (idx as u64).count_ones() as i32;
            let zeros = n_qubits as i32 - ones;
            amps.push(Complex64::new(a.powi(zeros) * b.powi(ones), 0.0));
        }
        Self::normalized(amps)
    }
}

/// How to build the reference state; mirrors the CLI reference flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceKind {
    BasisIndex(usize),
    Boltzmann { beta: f64 },
    Product { a: f64, b: f64 },
}

impl ReferenceKind {
    /// Realize the reference against a spectrum (basis/boltzmann kinds use
    /// its dimension and eigenbasis; product kinds require the dimension to
    /// be a power of two).
    pub fn realize(&self, spectrum: &Spectrum) -> Result<StateVector> {
        match *self {
            ReferenceKind::BasisIndex(k) => StateVector::basis(k, spectrum.dimension()),
            ReferenceKind::Boltzmann { beta } => StateVector::boltzmann(beta, spectrum),
            ReferenceKind::Product { a, b } => {
                let dim = spectrum.dimension();
                if !dim.is_power_of_two() {
                    return Err(VqpeError::InvalidArgument(format!(
                        "product reference needs a 2^n dimension, got {dim}"
                    )));
                }
                StateVector::product(a, b, dim.trailing_zeros() as usize)
            }
        }
    }
}

/// Hamiltonian eigenstates carrying reference weight above a threshold,
/// sorted by descending weight.
#[derive(Debug, Clone)]
pub struct SupportSpace {
    entries: Vec<(usize, f64)>,
    threshold: f64,
}

impl SupportSpace {
    /// Retained `(level index, weight)` pairs, descending by weight.
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Number of retained levels.
    pub fn q(&self) -> usize {
        self.entries.len()
    }

    /// Largest retained level index, if any level is retained.
    pub fn max_level(&self) -> Option<usize> {
        self.entries.iter().map(|(n, _)| *n).max()
    }

    /// Energies of the retained levels, ascending by level index.
    pub fn energies(&self, spectrum: &Spectrum) -> Vec<f64> {
        let mut idx: Vec<usize> = self.entries.iter().map(|(n, _)| *n).collect();
        idx.sort_unstable();
        idx.iter().map(|&n| spectrum.energies()[n]).collect()
    }
}

/// Decompose a reference state over a spectrum and retain the levels with
/// squared overlap above `threshold`.
pub fn support_space(
    reference: &StateVector,
    spectrum: &Spectrum,
    threshold: f64,
) -> Result<SupportSpace> {
    if !threshold.is_finite() || threshold <= 0.0 || threshold >= 1.0 {
        return Err(VqpeError::InvalidArgument(format!(
            "threshold must lie in (0,1), got {threshold}"
        )));
    }
    if reference.dimension() != spectrum.dimension() {
        return Err(VqpeError::InvalidArgument(format!(
            "reference dimension {} does not match spectrum dimension {}",
            reference.dimension(),
            spectrum.dimension()
        )));
    }
    let dim = spectrum.dimension();
    let mut entries = Vec::new();
    let mut total = 0.0;
    for n in 0..dim {
        let mut overlap = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            overlap += spectrum.eigenvectors()[(i, n)].conj() * reference.amplitudes()[i];
        }
        let w = overlap.norm_sqr();
        total += w;
        if w > threshold {
            entries.push((n, w));
        }
    }
    debug_assert!((total - 1.0).abs() < 1e-10, "weights sum to {total}");
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(SupportSpace { entries, threshold })
}

/// Closed-form support bound for a Boltzmann reference on a linear spectrum:
/// the largest level index whose ground-relative weight e^{-2 beta dE N}
/// stays above `s_sv`, i.e. `ceil(-ln(s_sv) / (2 beta dE)) - 1`.
pub fn boltzmann_support_bound(s_sv: f64, beta: f64, delta_e: f64) -> Result<usize> {
    if !(s_sv.is_finite() && s_sv > 0.0 && s_sv < 1.0 && beta > 0.0 && delta_e > 0.0) {
        return Err(VqpeError::InvalidArgument(
            "need 0 < s_sv < 1, beta > 0, delta_e > 0".into(),
        ));
    }
    let x = -s_sv.ln() / (2.0 * beta * delta_e);
    Ok((x.ceil() as isize - 1).max(0) as usize)
}
