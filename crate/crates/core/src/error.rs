use thiserror::Error;

use crate::params::ParameterKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid arity {0}: parameter sets are indexed by n >= 1")]
    InvalidArity(usize),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("grafting needs at least two trees, got {0}")]
    GraftTooFew(usize),

    #[error("a bare leaf has no decomposition")]
    DecomposeLeaf,

    #[error("element is not a valid member of {kind:?} of arity {arity}")]
    InvalidElement { kind: ParameterKind, arity: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("composition profile must have k >= 1 positive parts")]
    InvalidProfile,

    #[error("operation {op} does not belong to algebra type {ty}")]
    WrongOperation { op: String, ty: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation is not supported for algebra type {0}")]
    UnsupportedForType(String),

    #[error("cochains live over incompatible complexes")]
    MixedAlgebras,

    #[error("argument count {found} does not match outer degree {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("canonical multiplication fails pi o pi = 0; algebra violates its axioms")]
    NotAMultiplication,

    #[error("cochain is not a cocycle")]
    NotACocycle,

    #[error("unknown algebra type `{0}`")]
    UnknownType(String),

    #[error("unknown parameter kind `{0}`")]
    UnknownKind(String),

    #[error("modulus not prime: {0}")]
    ModulusNotPrime(u64),

    #[error("characteristic {0} is not supported (sign degeneracy)")]
    SmallCharacteristic(u64),

    #[error("modulus {0} too large")]
    ModulusTooLarge(u64),

    #[error("malformed field descriptor `{0}`")]
    MalformedField(String),

    #[error("malformed coefficient `{0}`")]
    MalformedCoefficient(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("field `{field}`: {message}")]
    InvalidField { field: String, message: String },

    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },

    #[error("unknown operation `{0}`")]
    UnknownOperation(String),

    #[error("duplicate entry ({i}, {j}, {k}) for operation `{op}`")]
    DuplicateEntry { op: String, i: usize, j: usize, k: usize },
}

impl Error {
    /// The underlying error, with any line annotation removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            e => e,
        }
    }
}
