use thiserror::Error;

/// Errors surfaced by the numerical kernels and plan builders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} in {context}")]
    DimensionMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    #[error("matrix is not Hermitian: max |H - H^dag| entry = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| entry = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("state vector is not normalized: |norm - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:.3e})"
    )]
    NonConvergence { sweeps: usize, off: f64 },

    #[error("Hamiltonian must contain at least one term")]
    EmptyHamiltonian,

    #[error("invalid Hamiltonian term: {0}")]
    InvalidTerm(String),

    #[error("dense realization capped at n <= {cap} qubits, got n = {n}")]
    DenseCap { n: usize, cap: usize },

    #[error("statevector path capped at n <= {cap} qubits, got n = {n}")]
    StateCap { n: usize, cap: usize },

    #[error("Hamiltonian is not diagonal in the computational basis")]
    NotDiagonal,

    #[error("gate count N = {n} is not a multiple of the term count L = {l}")]
    NotMultipleOfTerms { n: u64, l: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by numerical failure rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}
