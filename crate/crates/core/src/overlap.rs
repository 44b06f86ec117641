//! Overlap generator measurement and Toeplitz matrix assembly.
//!
//! On a linear time grid every VQPE matrix is a function of the lag
//! `k - j` alone, so the full set {S, H, U} is reconstructed from the
//! autocorrelation samples `g(m) = <psi0| U^m |psi0>`, `m = 0 .. N_T + 1`:
//! exactly `N_T + 2` measurements.

use num_complex::Complex64;

use crate::error::{Result, VqpeError};
use crate::evolution::{ApplyHamiltonian, Propagator};
use crate::hamiltonian::{Spectrum, StateVector};
use crate::CMat;

/// Time grid carrying the points `t_j`.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeGrid {
    /// `t_j = j * dt`, `j = 0 ..= n_t`.
    Linear { dt: f64, n_t: usize },
    /// Strictly increasing explicit points starting at `t_0 = 0`.
    Explicit(Vec<f64>),
}

impl TimeGrid {
    pub fn linear(dt: f64, n_t: usize) -> Result<Self> {
        if !(dt.is_finite()) {
            return Err(VqpeError::InvalidArgument("dt must be finite".into()));
        }
        Ok(TimeGrid::Linear { dt, n_t })
    }

    pub fn explicit(times: Vec<f64>) -> Result<Self> {
        if times.first() != Some(&0.0) {
            return Err(VqpeError::InvalidArgument(
                "explicit grids must start at t_0 = 0".into(),
            ));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(VqpeError::InvalidArgument(
                "explicit grid times must be strictly increasing".into(),
            ));
        }
        Ok(TimeGrid::Explicit(times))
    }

    /// Number of grid points, `N_T + 1`.
    pub fn len(&self) -> usize {
        match self {
            TimeGrid::Linear { n_t, .. } => n_t + 1,
            TimeGrid::Explicit(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn times(&self) -> Vec<f64> {
        match self {
            TimeGrid::Linear { dt, n_t } => (0..=*n_t).map(|j| j as f64 * dt).collect(),
            TimeGrid::Explicit(t) => t.clone(),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, TimeGrid::Linear { .. })
    }
}

/// The measured autocorrelation sequence `g(m) = <psi0|U^m|psi0>`,
/// `m = 0 ..= N_T + 1`, together with the number of inner products spent.
#[derive(Debug, Clone)]
pub struct OverlapGenerator {
    g: Vec<Complex64>,
    evaluation_count: usize,
}

impl OverlapGenerator {
    /// Wrap a raw lag sequence (index = lag). Mostly useful for noise
    /// injection and closed-form tests; `measure_overlap_generator` is the
    /// production path.
    pub fn from_lags(g: Vec<Complex64>, evaluation_count: usize) -> Result<Self> {
        if g.is_empty() {
            return Err(VqpeError::InvalidArgument(
                "generator needs at least lag 0".into(),
            ));
        }
        Ok(Self {
            g,
            evaluation_count,
        })
    }

    /// Largest stored lag.
    pub fn max_lag(&self) -> usize {
        self.g.len() - 1
    }

    pub fn lags(&self) -> &[Complex64] {
        &self.g
    }

    pub fn evaluation_count(&self) -> usize {
        self.evaluation_count
    }

    /// `g(m)` for any sign of `m`, using `g(-m) = conj(g(m))`.
    pub fn at(&self, lag: i64) -> Complex64 {
        if lag >= 0 {
            self.g[lag as usize]
        } else {
            self.g[(-lag) as usize].conj()
        }
    }

    /// Replace the lag sequence, preserving the measurement count.
    pub fn with_lags(&self, g: Vec<Complex64>) -> Self {
        Self {
            g,
            evaluation_count: self.evaluation_count,
        }
    }
}

/// Measure `g(m)` for `m = 0 ..= n_t + 1` from one running evolved state:
/// exactly `n_t + 2` inner products against the reference.
pub fn measure_overlap_generator(
    prop: &Propagator,
    psi0: &StateVector,
    n_t: usize,
) -> Result<OverlapGenerator> {
    let mut g = Vec::with_capacity(n_t + 2);
    let mut evaluations = 0usize;
    let mut running = psi0.clone();
    g.push(psi0.inner(&running));
    evaluations += 1;
    for _ in 1..=(n_t + 1) {
        running = prop.step(&running)?;
        g.push(psi0.inner(&running));
        evaluations += 1;
    }
    let g0 = g[0];
    if (g0 - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(VqpeError::NumericalFailure(format!(
            "g(0) = {g0} deviates from 1 for a normalized reference"
        )));
    }
    OverlapGenerator::from_lags(g, evaluations)
}

/// Closed-form exact generator `g(m) = sum_N |psi0_N|^2 e^{-i E_N m dt}`,
/// bypassing state propagation. Used by the harmonic studies where the
/// reference is specified directly in the eigenbasis.
pub fn exact_generator(
    spectrum: &Spectrum,
    psi0: &StateVector,
    dt: f64,
    n_t: usize,
) -> OverlapGenerator {
    let weights = eigenbasis_weights(spectrum, psi0);
    let g = (0..=n_t as i64 + 1)
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, e) in weights.iter().zip(spectrum.energies()) {
                if *w != 0.0 {
                    acc += Complex64::from_polar(*w, -e * dt * m as f64);
                }
            }
            acc
        })
        .collect();
    OverlapGenerator {
        g,
        evaluation_count: n_t + 2,
    }
}

pub(crate) fn eigenbasis_weights(spectrum: &Spectrum, psi0: &StateVector) -> Vec<f64> {
    let dim = spectrum.dimension();
    assert_eq!(psi0.dimension(), dim, "dimension mismatch");
    if spectrum.has_identity_eigenvectors() {
        return psi0.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    }
    (0..dim)
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                acc += spectrum.eigenvectors()[(i, n)].conj() * psi0.amplitudes()[i];
            }
            acc.norm_sqr()
        })
        .collect()
}

/// Hermitian Toeplitz overlap matrix `S[j,k] = g(k - j)`.
pub fn assemble_s(gen: &OverlapGenerator, n_t: usize) -> Result<CMat> {
    if gen.max_lag() < n_t {
        return Err(VqpeError::InvalidArgument(format!(
            "generator covers lags 0..{} but S needs lag {n_t}",
            gen.max_lag()
        )));
    }
    let dim = n_t + 1;
    Ok(CMat::from_fn(dim, dim, |j, k| gen.at(k as i64 - j as i64)))
}

/// Toeplitz time-evolution matrix `U[j,k] = g(k - j + 1) = S[j,k+1]`.
pub fn assemble_u(gen: &OverlapGenerator, n_t: usize) -> Result<CMat> {
    if gen.max_lag() < n_t + 1 {
        return Err(VqpeError::InvalidArgument(format!(
            "generator covers lags 0..{} but U needs lag {}",
            gen.max_lag(),
            n_t + 1
        )));
    }
    let dim = n_t + 1;
    Ok(CMat::from_fn(dim, dim, |j, k| {
        gen.at(k as i64 + 1 - j as i64)
    }))
}

/// Hermitian Toeplitz Hamiltonian matrix for exact evolution,
/// `H[j,k] = sum_N E_N |psi0_N|^2 e^{-i E_N (k-j) dt}` — valid only when the
/// propagator commutes with H, i.e. on a linear grid of exact evolution.
pub fn assemble_h_toeplitz(
    spectrum: &Spectrum,
    psi0: &StateVector,
    grid: &TimeGrid,
) -> Result<CMat> {
    let TimeGrid::Linear { dt, n_t } = grid else {
        return Err(VqpeError::InvalidArgument(
            "Toeplitz Hamiltonian assembly needs a linear grid; \
             use assemble_h_full for explicit grids"
                .into(),
        ));
    };
    let weights = eigenbasis_weights(spectrum, psi0);
    let h_lags: Vec<Complex64> = (0..=*n_t as i64)
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, e) in weights.iter().zip(spectrum.energies()) {
                if *w != 0.0 {
                    // from_polar multiplies by the (possibly negative) modulus
                    acc += Complex64::from_polar(w * e, -e * dt * m as f64);
                }
            }
            acc
        })
        .collect();
    let dim = n_t + 1;
    Ok(CMat::from_fn(dim, dim, |j, k| {
        let lag = k as i64 - j as i64;
        if lag >= 0 {
            h_lags[lag as usize]
        } else {
            h_lags[(-lag) as usize].conj()
        }
    }))
}

/// Toeplitz-Hamiltonian assembly guarded by the propagator contract:
/// Trotterized propagators do not commute with H, so their Hamiltonian matrix
/// must be assembled entry by entry with `assemble_h_full`.
pub fn assemble_h_toeplitz_for(
    prop: &Propagator,
    spectrum: &Spectrum,
    psi0: &StateVector,
    n_t: usize,
) -> Result<CMat> {
    if !prop.commutes_with_hamiltonian() {
        return Err(VqpeError::ContractViolation(
            "Toeplitz Hamiltonian assembly requires exact evolution; \
             a Trotterized propagator loses the Toeplitz property — \
             use assemble_h_full on the explicitly evolved states"
                .into(),
        ));
    }
    assemble_h_toeplitz(
        spectrum,
        psi0,
        &TimeGrid::Linear {
            dt: prop.dt(),
            n_t,
        },
    )
}

/// Brute-force Hamiltonian matrix `H[j,k] = <phi_j|H|phi_k>` over explicitly
/// stored states; Hermitian by construction (upper triangle computed, lower
/// conjugated).
pub fn assemble_h_full(h: &dyn ApplyHamiltonian, states: &[StateVector]) -> CMat {
    let n = states.len();
    let dim = h.dim();
    let mut out = CMat::zeros(n, n);
    let mut hv = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..n {
        h.apply(states[k].amplitudes(), &mut hv);
        for j in 0..=k {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in states[j].amplitudes().iter().zip(hv.iter()) {
                acc += a.conj() * b;
            }
            out[(j, k)] = acc;
            out[(k, j)] = acc.conj();
        }
    }
    out
}

/// Brute-force Gram matrix `S[j,k] = <phi_j|phi_k>` over explicit states.
pub fn gram_matrix(states: &[StateVector]) -> CMat {
    let n = states.len();
    let mut out = CMat::zeros(n, n);
    for k in 0..n {
        for j in 0..=k {
            let v = states[j].inner(&states[k]);
            out[(j, k)] = v;
            out[(k, j)] = v.conj();
        }
    }
    out
}

/// The assembled VQPE matrices for one run.
#[derive(Debug, Clone)]
pub struct KrylovMatrices {
    pub s_matrix: CMat,
    pub h_matrix: Option<CMat>,
    pub u_matrix: Option<CMat>,
    /// Whether each of (S, H, U) was assembled through the Toeplitz route.
    pub toeplitz_flags: [bool; 3],
}

impl KrylovMatrices {
    /// Assemble S and U from a generator (both Toeplitz).
    pub fn from_generator(gen: &OverlapGenerator, n_t: usize) -> Result<Self> {
        Ok(Self {
            s_matrix: assemble_s(gen, n_t)?,
            h_matrix: None,
            u_matrix: Some(assemble_u(gen, n_t)?),
            toeplitz_flags: [true, false, true],
        })
    }
}

/// Max deviation from the Toeplitz condition `M[j,k] = M[j+1,k+1]`.
pub fn toeplitz_deviation(m: &CMat) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst: f64 = 0.0;
    for j in 0..n.saturating_sub(1) {
        for k in 0..n.saturating_sub(1) {
            worst = worst.max((m[(j, k)] - m[(j + 1, k + 1)]).norm());
        }
    }
    worst
}
