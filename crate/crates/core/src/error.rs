use thiserror::Error;

use crate::variational::TraceEntry;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {requested} outside supported range 1..={max}")]
    Size { requested: usize, max: usize },

    #[error("qubit index {qubit} out of range for {num_qubits}-qubit register")]
    TargetOutOfRange { qubit: usize, num_qubits: usize },

    #[error("duplicate target qubit {0} in one operation")]
    DuplicateTarget(usize),

    #[error("gate {gate} expects {expected} targets, got {got}")]
    Arity { gate: String, expected: usize, got: usize },

    #[error("qubit count mismatch: expected {expected}, got {got}")]
    QubitMismatch { expected: usize, got: usize },

    #[error("parameter `{0}` is not bound")]
    Unbound(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("condition references measurement record {record} but only {available} records exist")]
    Ordering { record: usize, available: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no OpenQASM 2.0 mapping for gate {0}")]
    Export(String),

    #[error("Pauli generator is the identity")]
    EmptyGenerator,

    #[error("invalid Pauli string `{0}`")]
    PauliParse(String),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("invalid ansatz configuration: {0}")]
    Config(String),

    #[error("unknown ansatz family `{name}`; valid families: {}", valid.join(", "))]
    UnknownFamily { name: String, valid: Vec<String> },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("non-finite objective value after {} trace entries", trace.len())]
    NonFinite { trace: Vec<TraceEntry> },
}
