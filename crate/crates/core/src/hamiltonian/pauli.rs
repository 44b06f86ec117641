use std::fmt;

use num_complex::Complex64;

use crate::error::{Result, VqpeError};

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | 'i' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            _ => Err(VqpeError::InvalidArgument(format!(
                "unknown Pauli letter '{c}'"
            ))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, one letter per qubit.
///
/// Qubit 0 is the least significant bit of a computational basis index.
/// Internally the string is compiled to bit masks so that application to a
/// state vector and products/commutators are O(1) per basis pair:
/// `P|b> = i^{n_y} * (-1)^{popcount(b & zy_mask)} |b ^ x_mask>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    ops: Vec<Pauli>,
    x_mask: u64,
    zy_mask: u64,
    n_y: u32,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Result<Self> {
        if ops.is_empty() {
            return Err(VqpeError::InvalidArgument(
                "Pauli string must act on at least one qubit".into(),
            ));
        }
        if ops.len() > 64 {
            return Err(VqpeError::ResourceLimit(format!(
                "Pauli strings support up to 64 qubits, got {}",
                ops.len()
            )));
        }
        let mut x_mask = 0u64;
        let mut zy_mask = 0u64;
        let mut n_y = 0u32;
        for (q, op) in ops.iter().enumerate() {
            match op {
                Pauli::I => {}
                Pauli::X => x_mask |= 1 << q,
                Pauli::Y => {
                    x_mask |= 1 << q;
                    zy_mask |= 1 << q;
                    n_y += 1;
                }
                Pauli::Z => zy_mask |= 1 << q,
            }
        }
        Ok(Self {
            ops,
            x_mask,
            zy_mask,
            n_y,
        })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let ops = s.chars().map(Pauli::from_char).collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }

    /// One identity letter per qubit.
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n_qubits])
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn n_qubits(&self) -> usize {
        self.ops.len()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (self.x_mask | self.zy_mask).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.zy_mask == 0
    }

    pub(crate) fn x_mask(&self) -> u64 {
        self.x_mask
    }

    /// Two Pauli strings either commute or anticommute; they anticommute iff
    /// the number of positions carrying differing non-identity letters is odd.
    pub fn commutes_with(&self, other: &Self) -> bool {
        // Symplectic form: parity of |x1 & zy2| + |zy1 & x2| counts exactly
        // the positions with differing non-identity letters.
        let anti = (self.x_mask & other.zy_mask).count_ones()
            + (self.zy_mask & other.x_mask).count_ones();
        anti.is_multiple_of(2)
    }

    /// Operator product `self * other` as `(phase, string)` with phase a
    /// power of `i`.
    pub fn product(&self, other: &Self) -> (Complex64, Self) {
        debug_assert_eq!(self.n_qubits(), other.n_qubits());
        let mut ops = Vec::with_capacity(self.ops.len());
        let mut phase_quarters = 0i32; // multiples of i
        for (&a, &b) in self.ops.iter().zip(other.ops.iter()) {
            let (ph, c) = single_product(a, b);
            phase_quarters += ph;
            ops.push(c);
        }
        let phase = match phase_quarters.rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        (phase, Self::new(ops).expect("same length as inputs"))
    }

    /// Dense matrix of the string, `M[b ^ x_mask, b] = phase(b)`.
    pub fn dense_matrix(&self) -> crate::CMat {
        let dim = 1usize << self.n_qubits();
        let mut m = crate::CMat::zeros(dim, dim);
        for b in 0..dim as u64 {
            m[((b ^ self.x_mask) as usize, b as usize)] = self.basis_phase(b);
        }
        m
    }

    /// Phase picked up on basis state `b`: `i^{n_y} * (-1)^{popcount(b & zy)}`.
    pub(crate) fn basis_phase(&self, b: u64) -> Complex64 {
        let sign = if (b & self.zy_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        match self.n_y % 4 {
            0 => Complex64::new(sign, 0.0),
            1 => Complex64::new(0.0, sign),
            2 => Complex64::new(-sign, 0.0),
            _ => Complex64::new(0.0, -sign),
        }
    }
}

/// Single-qubit product table: returns (phase as power of i, result letter).
fn single_product(a: Pauli, b: Pauli) -> (i32, Pauli) {
    use Pauli::*;
    match (a, b) {
        (I, p) | (p, I) => (0, p),
        (X, X) | (Y, Y) | (Z, Z) => (0, I),
        (X, Y) => (1, Z),
        (Y, X) => (-1, Z),
        (Y, Z) => (1, X),
        (Z, Y) => (-1, X),
        (Z, X) => (1, Y),
        (X, Z) => (-1, Y),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            write!(f, "{}", op.as_char())?;
        }
        Ok(())
    }
}

/// Real-coefficient sum of Pauli strings. Duplicate strings are merged on
/// construction and exact zeros dropped, so the term count is the number of
/// distinct contributing strings.
#[derive(Debug, Clone)]
pub struct PauliSumHamiltonian {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSumHamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(VqpeError::InvalidArgument("n_qubits must be >= 1".into()));
        }
        let mut merged: Vec<(f64, PauliString)> = Vec::with_capacity(terms.len());
        for (coeff, string) in terms {
            if !coeff.is_finite() {
                return Err(VqpeError::InvalidArgument(
                    "Pauli coefficients must be finite reals".into(),
                ));
            }
            if string.n_qubits() != n_qubits {
                return Err(VqpeError::InvalidArgument(format!(
                    "term '{string}' acts on {} qubits, Hamiltonian has {n_qubits}",
                    string.n_qubits()
                )));
            }
            match merged.iter_mut().find(|(_, s)| *s == string) {
                Some((c, _)) => *c += coeff,
                None => merged.push((coeff, string)),
            }
        }
        merged.retain(|(c, _)| *c != 0.0);
        Ok(Self {
            n_qubits,
            terms: merged,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dimension(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Number of distinct terms (the M of the resource formulas).
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// One-norm of the coefficients, an upper bound on the operator norm.
    pub fn alpha_one_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }
}
