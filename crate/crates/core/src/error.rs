use thiserror::Error;

use crate::executor::LocalityViolation;
use crate::gate_model::ValidationError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register of {requested} qubits exceeds the configured maximum of {max}")]
    Capacity { requested: usize, max: usize },

    #[error("amplitude array length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("amplitude array is the zero vector")]
    ZeroVector,

    #[error("amplitude array contains a non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("amplitude array has squared norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation of U·U† from I is {0:e})")]
    NonUnitary(f64),

    #[error("qubit {index} is out of range for a {num_qubits}-qubit register")]
    OutOfRange { index: usize, num_qubits: usize },

    #[error("qubit {0} is used more than once in a single gate")]
    IndexCollision(usize),

    #[error("qubit {0} is not in |0> and cannot be used for Bell-pair preparation")]
    BellPrecondition(usize),

    #[error("outcome {outcome} on qubit {qubit} is impossible (probability {probability:e})")]
    ImpossibleBranch {
        qubit: usize,
        outcome: u8,
        probability: f64,
    },

    #[error("state does not factor: qubit {0} has support outside its fixed value")]
    Factorization(usize),

    #[error("subregister selection is not a partition of the register: {0}")]
    BadPartition(String),

    #[error("register size mismatch: expected {expected} qubits, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid gate: {}", join(.0))]
    InvalidSpec(Vec<ValidationError>),

    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),

    #[error("locality check failed: {}", join(.0))]
    Locality(Vec<LocalityViolation>),

    #[error("measurement `{tag}` on {qubit} cannot yield {outcome} (probability {probability:e})")]
    ImpossibleMeasurement {
        tag: String,
        qubit: String,
        outcome: u8,
        probability: f64,
    },

    #[error("condition `{0}` has not been delivered")]
    UnresolvedTag(String),

    #[error("no forced outcome supplied for measurement `{0}`")]
    MissingOutcome(String),

    #[error("branch has {found} bits but the program performs {expected} measurements ({order})")]
    BranchLength { expected: usize, found: usize, order: String },

    #[error("program performs {count} measurements, more than the enumeration limit of {limit}")]
    MeasurementLimit { count: usize, limit: usize },

    #[error("ancilla qubit `{0}` was never measured")]
    UnmeasuredAncilla(String),

    #[error("target unitary is not a permutation matrix")]
    NonPermutation,

    #[error("basis input {input} does not map to a single basis output")]
    NonDeterministic { input: String },

    #[error("invalid scenario: {0}")]
    Scenario(String),
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
