use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("relation {0} of the source is not preserved by the ring map")]
    RelationNotPreserved(usize),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("degree {0} lies outside the certified window")]
    OutsideWindow(i64),

    #[error("window [{lo}, {hi}] cannot be certified with resolution length at most {max_length}")]
    WindowTooNarrow { lo: i64, hi: i64, max_length: usize },

    #[error("tower did not stabilize in degrees {0:?}")]
    NotStabilized(Vec<i64>),

    #[error("map is not finite: {0}")]
    NotFinite(String),

    #[error("not smooth: {0}")]
    NotSmooth(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("invalid module map: {0}")]
    InvalidMap(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
