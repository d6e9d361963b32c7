use thiserror::Error;

/// Errors raised by parsing, validation and the bounded enumeration paths.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("vertex id `{0}` uses the reserved prefix `t:`")]
    ReservedId(String),

    #[error("capacity bound `{bound}` exceeded: {actual} > {limit}")]
    Capacity {
        bound: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("invalid subpartition: {0}")]
    InvalidSubpartition(String),

    #[error("orientation does not match the edge set: {0}")]
    OrientationMismatch(String),

    #[error("set is not a member of the required family: {0}")]
    NotInFamily(String),

    #[error("bi-set has an empty inner set")]
    EmptyInner,

    #[error("atom index {0} out of range")]
    AtomOutOfRange(usize),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// A broken internal invariant; always indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn capacity(bound: &'static str, limit: usize, actual: usize) -> Result<()> {
    if actual > limit {
        Err(Error::Capacity {
            bound,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}
