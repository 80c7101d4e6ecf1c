use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("parameter count mismatch: expected {expected}, got {got}")]
    ParamCount { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} needs at most {max} qubits, got {got}")]
    TooLarge { what: &'static str, max: usize, got: usize },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("non-real coefficient at line {line}: {token}")]
    NonRealCoefficient { line: usize, token: String },

    #[error("unsupported gate for this rewrite: {0}")]
    UnsupportedGate(String),

    #[error("simplification did not terminate after {0} passes")]
    TerminationFailure(usize),

    #[error("optimizer diverged: {0}")]
    Divergence(String),

    #[error("empty gate dictionary")]
    EmptyDictionary,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
