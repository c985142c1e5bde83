use thiserror::Error;

/// Failures raised while validating inputs or applying graph moves.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Schema(String),

    #[error("group axiom violated: {0}")]
    GroupAxiom(String),

    #[error("crossed module axiom violated: {0}")]
    Peiffer(String),

    #[error("illegal graph move: {0}")]
    IllegalMove(String),

    #[error("invalid argument: {0}")]
    Input(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Schema(_) => "E_SCHEMA",
            Error::GroupAxiom(_) => "E_GROUP_AXIOM",
            Error::Peiffer(_) => "E_PEIFFER",
            Error::IllegalMove(_) => "E_ILLEGAL_MOVE",
            Error::Input(_) => "E_INPUT",
            Error::Invariant(_) => "E_INVARIANT",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
