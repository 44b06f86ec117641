//! Real-time propagation of state vectors: exact (eigenbasis), Lanczos, and
//! first-order Trotterized unitary evolution.

use std::sync::Arc;

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Result, VqpeError};
use crate::hamiltonian::{
    DenseHermitianMatrix, DiagonalHamiltonian, PauliSumHamiltonian, Spectrum, StateVector,
};

/// Matrix-free Hamiltonian application, the handle Lanczos propagation needs.
pub trait ApplyHamiltonian: Send + Sync {
    fn dim(&self) -> usize;
    /// `out = H v`.
    fn apply(&self, v: &[Complex64], out: &mut [Complex64]);

    fn expectation(&self, v: &[Complex64]) -> f64 {
        let mut hv = vec![Complex64::new(0.0, 0.0); v.len()];
        self.apply(v, &mut hv);
        v.iter()
            .zip(hv.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re
    }
}

impl ApplyHamiltonian for DiagonalHamiltonian {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        for ((o, a), e) in out.iter_mut().zip(v).zip(self.energies()) {
            *o = a * *e;
        }
    }
}

impl ApplyHamiltonian for DenseHermitianMatrix {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        let m = self.matrix();
        for i in 0..m.nrows() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m.ncols() {
                acc += m[(i, j)] * v[j];
            }
            out[i] = acc;
        }
    }
}

impl ApplyHamiltonian for PauliSumHamiltonian {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.fill(Complex64::new(0.0, 0.0));
        for (coeff, string) in self.terms() {
            let x = string.x_mask();
            for b in 0..v.len() as u64 {
                // (P v)[b ^ x] += phase(b) v[b]
                out[(b ^ x) as usize] += string.basis_phase(b) * v[b as usize] * *coeff;
            }
        }
    }
}

/// `exp(-i H t) |psi>` through the eigenbasis.
pub fn evolve_exact(spectrum: &Spectrum, psi: &StateVector, t: f64) -> StateVector {
    let dim = spectrum.dimension();
    assert_eq!(psi.dimension(), dim, "dimension mismatch");
    if spectrum.has_identity_eigenvectors() {
        let amps = psi
            .amplitudes()
            .iter()
            .zip(spectrum.energies())
            .map(|(a, e)| a * Complex64::from_polar(1.0, -e * t))
            .collect();
        return StateVector::normalized(amps).expect("unitary evolution");
    }
    let v = spectrum.eigenvectors();
    // coefficients in the eigenbasis
    let mut coeff = vec![Complex64::new(0.0, 0.0); dim];
    for n in 0..dim {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            acc += v[(i, n)].conj() * psi.amplitudes()[i];
        }
        coeff[n] = acc * Complex64::from_polar(1.0, -spectrum.energies()[n] * t);
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for n in 0..dim {
        if coeff[n].norm_sqr() == 0.0 {
            continue;
        }
        for i in 0..dim {
            amps[i] += v[(i, n)] * coeff[n];
        }
    }
    StateVector::normalized(amps).expect("unitary evolution")
}

/// Krylov-subspace approximation to `exp(-i H t) |psi>` with adaptive time
/// sub-stepping. The result matches the exact evolution within `tol`.
pub fn evolve_lanczos(
    h: &dyn ApplyHamiltonian,
    psi: &StateVector,
    t: f64,
    krylov_dim: usize,
    tol: f64,
) -> Result<StateVector> {
    if krylov_dim < 2 {
        return Err(VqpeError::InvalidArgument(
            "krylov_dim must be at least 2".into(),
        ));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(VqpeError::InvalidArgument("tol must be positive".into()));
    }
    if t == 0.0 {
        return Ok(psi.clone());
    }
    let m = krylov_dim.min(h.dim());
    let mut cur = psi.amplitudes().to_vec();
    let mut remaining = t;
    let mut dt_try = t;
    let mut substeps = 0usize;
    const MAX_SUBSTEPS: usize = 4096;
    while remaining.abs() > 0.0 {
        if dt_try.abs() > remaining.abs() {
            dt_try = remaining;
        }
        let (next, err) = krylov_step(h, &cur, dt_try, m);
        let budget = tol * (dt_try / t).abs();
        if err <= budget || dt_try.abs() < 1e-14 * t.abs() {
            cur = next;
            remaining -= dt_try;
        } else {
            dt_try *= 0.5;
        }
        substeps += 1;
        if substeps > MAX_SUBSTEPS {
            return Err(VqpeError::NumericalFailure(format!(
                "Lanczos propagation did not converge within {MAX_SUBSTEPS} sub-steps \
                 (t = {t}, krylov_dim = {krylov_dim}, tol = {tol})"
            )));
        }
    }
    StateVector::normalized(cur)
}

/// One Lanczos exponential step; returns the propagated vector and an a
/// posteriori error estimate.
fn krylov_step(h: &dyn ApplyHamiltonian, v0: &[Complex64], t: f64, m: usize) -> (Vec<Complex64>, f64) {
    let dim = v0.len();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(m);
    basis.push(v0.to_vec());
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let mut k_used = m;
    let mut beta_next = 0.0;
    for k in 0..m {
        h.apply(&basis[k], &mut w);
        if k > 0 {
            let b = beta[k - 1];
            for (wi, pi) in w.iter_mut().zip(basis[k - 1].iter()) {
                *wi -= pi * b;
            }
        }
        let a: f64 = basis[k]
            .iter()
            .zip(w.iter())
            .map(|(v, w)| (v.conj() * w).re)
            .sum();
        alpha.push(a);
        for (wi, vi) in w.iter_mut().zip(basis[k].iter()) {
            *wi -= vi * a;
        }
        // full reorthogonalization keeps the small sizes here exactly stable
        for prev in &basis {
            let ovl: Complex64 = prev.iter().zip(w.iter()).map(|(p, w)| p.conj() * w).sum();
            for (wi, pi) in w.iter_mut().zip(prev.iter()) {
                *wi -= pi * ovl;
            }
        }
        let b: f64 = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if k + 1 == m {
            beta_next = b;
            break;
        }
        if b < 1e-14 {
            // invariant subspace reached; the projected solution is exact
            k_used = k + 1;
            beta_next = 0.0;
            break;
        }
        beta.push(b);
        let mut next = w.clone();
        for x in &mut next {
            *x /= b;
        }
        basis.push(next);
    }
    let k = k_used.min(alpha.len());
    // small tridiagonal exponential: y = Q exp(-i L t) Q^T e_1
    let tm = Mat::<f64>::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j || j + 1 == i {
            beta[i.min(j)]
        } else {
            0.0
        }
    });
    let evd = tm
        .self_adjoint_eigen(Side::Lower)
        .expect("tridiagonal eigensolve");
    let mut y = vec![Complex64::new(0.0, 0.0); k];
    for n in 0..k {
        let phase = Complex64::from_polar(1.0, -evd.S().column_vector()[n] * t);
        let q0 = evd.U()[(0, n)];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += Complex64::new(evd.U()[(i, n)] * q0, 0.0) * phase;
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (i, yi) in y.iter().enumerate() {
        for (o, b) in out.iter_mut().zip(basis[i].iter()) {
            *o += b * yi;
        }
    }
    let err = beta_next * y[k - 1].norm() * t.abs().max(1.0);
    (out, err)
}

/// Apply one first-order Trotter step `prod_j exp(-i a_j P_j dt)` in the
/// Hamiltonian's canonical term order. Each Pauli-string exponential is
/// applied analytically: `exp(-i theta P) = cos(theta) I - i sin(theta) P`.
pub fn trotter1_step(h: &PauliSumHamiltonian, psi: &StateVector, dt: f64) -> StateVector {
    let mut amps = psi.amplitudes().to_vec();
    trotter1_in_place(h, &mut amps, dt);
    StateVector::normalized(amps).expect("unitary evolution")
}

fn trotter1_in_place(h: &PauliSumHamiltonian, amps: &mut [Complex64], dt: f64) {
    let dim = amps.len() as u64;
    for (coeff, string) in h.terms() {
        let theta = coeff * dt;
        let (c, s) = (theta.cos(), theta.sin());
        let x = string.x_mask();
        if x == 0 {
            // diagonal factor: amplitude picks up e^{-i theta * (+-1)}
            for b in 0..dim {
                let sign = string.basis_phase(b).re; // +-1, no X/Y letters
                amps[b as usize] *= Complex64::new(c, -s * sign);
            }
        } else {
            let pivot = 1u64 << x.trailing_zeros();
            for b in 0..dim {
                if b & pivot != 0 {
                    continue;
                }
                let p = b ^ x;
                let (ab, ap) = (amps[b as usize], amps[p as usize]);
                let ph_b = string.basis_phase(b);
                let ph_p = string.basis_phase(p);
                amps[b as usize] = ab * c - Complex64::new(0.0, s) * ph_p * ap;
                amps[p as usize] = ap * c - Complex64::new(0.0, s) * ph_b * ab;
            }
        }
    }
}

/// Single-step unitary propagator over a linear time grid.
#[derive(Clone)]
pub enum Propagator {
    /// Exact evolution through a precomputed spectrum.
    ExactEigen { spectrum: Arc<Spectrum>, dt: f64 },
    /// Krylov-approximated exact evolution for matrix-free Hamiltonians.
    Lanczos {
        ham: Arc<dyn ApplyHamiltonian>,
        dt: f64,
        krylov_dim: usize,
        tol: f64,
    },
    /// First-order Trotterization of a Pauli-sum Hamiltonian.
    Trotter1 { ham: Arc<PauliSumHamiltonian>, dt: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorKind {
    ExactEigen,
    Lanczos,
    Trotter1,
}

impl Propagator {
    pub fn exact_eigen(spectrum: Spectrum, dt: f64) -> Self {
        Propagator::ExactEigen {
            spectrum: Arc::new(spectrum),
            dt,
        }
    }

    pub fn lanczos(ham: Arc<dyn ApplyHamiltonian>, dt: f64, krylov_dim: usize, tol: f64) -> Self {
        Propagator::Lanczos {
            ham,
            dt,
            krylov_dim,
            tol,
        }
    }

    pub fn trotter1(ham: PauliSumHamiltonian, dt: f64) -> Self {
        Propagator::Trotter1 {
            ham: Arc::new(ham),
            dt,
        }
    }

    pub fn dt(&self) -> f64 {
        match self {
            Propagator::ExactEigen { dt, .. }
            | Propagator::Lanczos { dt, .. }
            | Propagator::Trotter1 { dt, .. } => *dt,
        }
    }

    pub fn kind(&self) -> PropagatorKind {
        match self {
            Propagator::ExactEigen { .. } => PropagatorKind::ExactEigen,
            Propagator::Lanczos { .. } => PropagatorKind::Lanczos,
            Propagator::Trotter1 { .. } => PropagatorKind::Trotter1,
        }
    }

    /// Exact-evolution propagators commute with H; Trotterized ones do not.
    pub fn commutes_with_hamiltonian(&self) -> bool {
        !matches!(self, Propagator::Trotter1 { .. })
    }

    /// Advance the state by one time step.
    pub fn step(&self, psi: &StateVector) -> Result<StateVector> {
        match self {
            Propagator::ExactEigen { spectrum, dt } => Ok(evolve_exact(spectrum, psi, *dt)),
            Propagator::Lanczos {
                ham,
                dt,
                krylov_dim,
                tol,
            } => evolve_lanczos(ham.as_ref(), psi, *dt, *krylov_dim, *tol),
            Propagator::Trotter1 { ham, dt } => Ok(trotter1_step(ham, psi, *dt)),
        }
    }
}

/// `[psi0, U psi0, U^2 psi0, ..., U^n psi0]`.
pub fn evolved_sequence(
    prop: &Propagator,
    psi0: &StateVector,
    n_steps: usize,
) -> Result<Vec<StateVector>> {
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(psi0.clone());
    for _ in 0..n_steps {
        let next = prop.step(out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}
