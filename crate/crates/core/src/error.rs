use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum VqpeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A dense construction would exceed the configured dimension cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// All singular values fell below the truncation threshold (or an
    /// equivalent rank collapse) so no eigenvalue can be extracted.
    #[error("degenerate problem: {0}")]
    DegenerateProblem(String),

    /// An operation was called outside its contract (e.g. the Toeplitz
    /// Hamiltonian assembly with a Trotterized propagator).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, VqpeError>;

impl VqpeError {
    /// Process exit code convention: 2 invalid input, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            VqpeError::InvalidArgument(_)
            | VqpeError::ResourceLimit(_)
            | VqpeError::ContractViolation(_)
            | VqpeError::Validation(_)
            | VqpeError::Parse { .. } => 2,
            VqpeError::NumericalFailure(_) | VqpeError::DegenerateProblem(_) => 3,
            VqpeError::Io(_) => 4,
        }
    }
}
