//! Noise injection for VQPE matrices and shot-limited Hadamard-test
//! simulation of overlap measurements.
//!
//! Every random draw comes from a counter-based stream keyed by
//! `(seed, indices...)`, so parallel evaluation order can never change a
//! result and identical specs reproduce identical outputs bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, VqpeError};
use crate::evolution::Propagator;
use crate::hamiltonian::StateVector;
use crate::overlap::{measure_overlap_generator, OverlapGenerator};
use crate::CMat;

/// Independent RNG stream for a given seed and index path.
pub fn keyed_rng(seed: u64, stream: &[u64]) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    for (i, s) in stream.iter().take(3).enumerate() {
        key[8 + 8 * i..16 + 8 * i].copy_from_slice(&s.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// One standard-normal pair (Box-Muller).
fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMode {
    /// Independent N(0, eps) on the real and imaginary part of every matrix
    /// element; Hermiticity is deliberately not restored (the solver's
    /// Hermitize step absorbs it, mimicking independently measured entries).
    Element,
    /// Independent N(0, eps) per generator entry g(m); matrices reassembled
    /// from the perturbed generator keep the Toeplitz structure exactly.
    Toeplitz,
    /// Shot-limited Hadamard-test sampling of each generator entry.
    Shots,
}

/// Full description of a noise model, including its seed.
#[derive(Debug, Clone, Copy)]
pub struct NoiseSpec {
    pub mode: NoiseMode,
    pub epsilon: f64,
    pub shots: u64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn element(epsilon: f64, seed: u64) -> Result<Self> {
        Self::new(NoiseMode::Element, epsilon, 1, seed)
    }

    pub fn toeplitz(epsilon: f64, seed: u64) -> Result<Self> {
        Self::new(NoiseMode::Toeplitz, epsilon, 1, seed)
    }

    pub fn shots(shots: u64, seed: u64) -> Result<Self> {
        Self::new(NoiseMode::Shots, 0.0, shots, seed)
    }

    pub fn new(mode: NoiseMode, epsilon: f64, shots: u64, seed: u64) -> Result<Self> {
        if epsilon < 0.0 || !epsilon.is_finite() {
            return Err(VqpeError::InvalidArgument(format!(
                "epsilon must be a finite non-negative number, got {epsilon}"
            )));
        }
        if mode == NoiseMode::Shots && shots == 0 {
            return Err(VqpeError::InvalidArgument(
                "shots mode needs at least one sample".into(),
            ));
        }
        Ok(Self {
            mode,
            epsilon,
            shots,
            seed,
        })
    }
}

/// Perturb an assembled matrix. Element mode draws per element (streams keyed
/// by row, column); Toeplitz mode reads the generator off the first row of a
/// Hermitian Toeplitz matrix, perturbs it per lag, and reassembles.
pub fn perturb(matrix: &CMat, spec: &NoiseSpec) -> Result<CMat> {
    match spec.mode {
        NoiseMode::Element => {
            let mut out = matrix.to_owned();
            if spec.epsilon == 0.0 {
                return Ok(out);
            }
            for i in 0..out.nrows() {
                for j in 0..out.ncols() {
                    let mut rng = keyed_rng(spec.seed, &[i as u64, j as u64]);
                    let (a, b) = normal_pair(&mut rng);
                    out[(i, j)] += Complex64::new(a * spec.epsilon, b * spec.epsilon);
                }
            }
            Ok(out)
        }
        NoiseMode::Toeplitz => {
            if matrix.nrows() != matrix.ncols() {
                return Err(VqpeError::InvalidArgument(
                    "Toeplitz perturbation needs a square matrix".into(),
                ));
            }
            let n = matrix.ncols();
            let lags: Vec<Complex64> = (0..n).map(|k| matrix[(0, k)]).collect();
            let gen = OverlapGenerator::from_lags(lags, 0)?;
            let gen = perturb_generator(&gen, spec)?;
            Ok(CMat::from_fn(n, n, |j, k| gen.at(k as i64 - j as i64)))
        }
        NoiseMode::Shots => Err(VqpeError::InvalidArgument(
            "shots mode perturbs generators, not matrices; \
             use sampled_overlap_generator"
                .into(),
        )),
    }
}

/// Perturb the generator entries themselves (streams keyed by lag).
pub fn perturb_generator(gen: &OverlapGenerator, spec: &NoiseSpec) -> Result<OverlapGenerator> {
    match spec.mode {
        NoiseMode::Toeplitz => {
            let lags: Vec<Complex64> = gen
                .lags()
                .iter()
                .enumerate()
                .map(|(m, g)| {
                    let mut rng = keyed_rng(spec.seed, &[m as u64]);
                    let (a, b) = normal_pair(&mut rng);
                    g + Complex64::new(a * spec.epsilon, b * spec.epsilon)
                })
                .collect();
            Ok(gen.with_lags(lags))
        }
        NoiseMode::Shots => {
            let lags: Vec<Complex64> = gen
                .lags()
                .iter()
                .enumerate()
                .map(|(m, g)| hadamard_test_stream(*g, spec.shots, spec.seed, m as u64).map(|e| e.value))
                .collect::<Result<_>>()?;
            Ok(gen.with_lags(lags))
        }
        NoiseMode::Element => Err(VqpeError::InvalidArgument(
            "element mode perturbs assembled matrices, not generators".into(),
        )),
    }
}

/// Shot-limited estimate of one overlap value.
#[derive(Debug, Clone, Copy)]
pub struct HadamardEstimate {
    pub value: Complex64,
    pub shots_used: u64,
    pub stderr: f64,
}

/// Simulate the one-ancilla Hadamard test at the amplitude level: the X
/// register samples +-1 with `P(+1) = (1 + Re g)/2` and the Y register
/// independently with `P(+1) = (1 + Im g)/2`; the estimate is
/// `mean_X + i mean_Y`.
pub fn hadamard_test(g_true: Complex64, shots: u64, seed: u64) -> Result<HadamardEstimate> {
    hadamard_test_stream(g_true, shots, seed, 0)
}

fn hadamard_test_stream(
    g_true: Complex64,
    shots: u64,
    seed: u64,
    lag: u64,
) -> Result<HadamardEstimate> {
    if shots == 0 {
        return Err(VqpeError::InvalidArgument("shots must be >= 1".into()));
    }
    if g_true.re.abs() > 1.0 + 1e-9 || g_true.im.abs() > 1.0 + 1e-9 {
        return Err(VqpeError::InvalidArgument(format!(
            "overlap {g_true} lies outside the unit box; not a valid state overlap"
        )));
    }
    let sample_register = |expect: f64, register: u64| -> f64 {
        let p_plus = ((1.0 + expect) / 2.0).clamp(0.0, 1.0);
        let mut rng = keyed_rng(seed, &[lag, register]);
        let mut plus = 0u64;
        for _ in 0..shots {
            if rng.random::<f64>() < p_plus {
                plus += 1;
            }
        }
        (2.0 * plus as f64 - shots as f64) / shots as f64
    };
    let mean_x = sample_register(g_true.re, 0);
    let mean_y = sample_register(g_true.im, 1);
    let m = shots as f64;
    let stderr =
        (((1.0 - mean_x * mean_x) / m + (1.0 - mean_y * mean_y) / m) / 2.0).sqrt();
    Ok(HadamardEstimate {
        value: Complex64::new(mean_x, mean_y),
        shots_used: shots,
        stderr,
    })
}

/// Measure the overlap generator with shot noise: every entry, including
/// `m = 0`, is replaced by an independent Hadamard-test estimate, mirroring a
/// real experiment. The inner-product count stays at `n_t + 2`.
pub fn sampled_overlap_generator(
    prop: &Propagator,
    psi0: &StateVector,
    n_t: usize,
    shots: u64,
    seed: u64,
) -> Result<OverlapGenerator> {
    let exact = measure_overlap_generator(prop, psi0, n_t)?;
    perturb_generator(&exact, &NoiseSpec::shots(shots, seed)?)
}
