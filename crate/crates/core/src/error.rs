use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("register of {0} qubits is outside the supported range 1..=8")]
    RegisterSize(usize),
    #[error("expected {expected} amplitudes, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("state is not normalized (|norm^2 - 1| = {0:e})")]
    NotNormalized(f64),
    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),
    #[error("state vector has zero norm")]
    ZeroVector,
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("eigenvalue {0:e} lies outside [0, 1]")]
    EigenvalueOutOfRange(f64),
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("unsupported cut: {0}")]
    UnsupportedCut(String),
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
    #[error("c-NOT control and target are both qubit {0}")]
    ControlIsTarget(usize),
}
