use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected} qubits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid observable token {token:?}: {reason}")]
    InvalidToken { token: String, reason: String },

    #[error("invalid qubit order {0:?}: must be a permutation of 1..n")]
    InvalidOrder(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("operator is not Hermitian (phase {0})")]
    NotHermitian(String),

    #[error("operators {0} and {1} do not commute")]
    NonCommuting(String, String),

    #[error("generators are not independent: group has {actual} distinct elements, expected {expected}")]
    DependentGenerators { expected: usize, actual: usize },

    #[error("{what} needs at most {max} qubits, got {actual}")]
    TooManyQubits { what: &'static str, max: usize, actual: usize },

    #[error("LHV assignment space 2^{bits} exceeds the cap of {cap} assignments")]
    AssignmentSpaceTooLarge { bits: u32, cap: u64 },

    #[error("term {0} appears with both signs")]
    OppositeSignDuplicate(String),

    #[error("LHV bound has not been computed for operator {0:?}")]
    MissingBound(String),

    #[error("no violation: noiseless value {value} does not exceed the LHV bound {bound}")]
    NoViolation { value: f64, bound: f64 },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("measurement records do not match the operator: {0}")]
    RecordMismatch(String),

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Poisson draw returned zero events twice (mean {0})")]
    ZeroEvents(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
