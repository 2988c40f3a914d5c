use thiserror::Error;

/// A syntax error in a polynomial or rational literal, with a byte offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree {degree} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: u64, cap: u32 },

    #[error("invalid symplectic form: {0}")]
    InvalidSymplecticForm(String),

    #[error("generator {index} is singular")]
    SingularGenerator { index: usize },

    #[error("group closure exceeded the cap of {cap} elements")]
    GroupCapExceeded { cap: usize },

    #[error("element index {0} does not belong to the group")]
    ForeignElement(usize),

    #[error("unknown group word {0:?}")]
    UnknownWord(String),

    #[error("skew elements live over different groups")]
    GroupMismatch,

    #[error("class index {index} out of range ({count} classes)")]
    InvalidClass { index: usize, count: usize },

    #[error("polynomial is not fixed by element {element}")]
    NotFixed { element: usize },

    #[error("operation requires a non-identity element")]
    IdentityElement,

    #[error("group has no non-identity conjugacy class")]
    NoNonIdentityClass,

    #[error("phi is not invariant under the group")]
    NonInvariantPhi,

    #[error("arity mismatch: relation has {found} variables, generator set has {expected}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("generator {name:?} is not homogeneous of positive degree")]
    BadGenerator { name: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
