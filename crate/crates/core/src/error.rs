use thiserror::Error;

use crate::trees::Colour;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("colour mismatch at input {index}: slot expects {expected}, operand has output {found}")]
    ColourMismatch {
        index: usize,
        expected: Colour,
        found: Colour,
    },
    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("edge is not reducible: {0}")]
    NotReducible(String),
    #[error("map is not a {kind}: {witness}")]
    MorphismCheck { kind: &'static str, witness: String },
    #[error("size-1 configuration has no {0}")]
    SizeOne(&'static str),
    #[error("configuration has a diagonal, it is not a bubble")]
    HasDiagonal,
    #[error("invalid configuration: {0}")]
    InvalidBnc(String),
    #[error("bound {requested} exceeds the configured limit {limit}")]
    BoundExceeded { requested: usize, limit: usize },
    #[error("non-binary node in tree")]
    NonBinary,
    #[error("rewriting did not terminate: {0}")]
    NonTerminating(String),
    #[error("series constant term {0} is not invertible over the integers")]
    NotInvertible(String),
    #[error("unknown registry entry `{0}`")]
    UnknownEntry(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
