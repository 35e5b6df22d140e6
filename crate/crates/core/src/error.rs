use std::path::PathBuf;

use thiserror::Error;

use crate::complex::ValidationError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("expected {expected} points, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("{0} is not a circuit")]
    NotACircuit(String),
    #[error("{0} is not a face of the triangulation")]
    NotAFace(String),
    #[error("{0} is not a vertex of the triangulation")]
    NotAVertex(String),
    #[error("{0} is not a long diagonal of the chosen parity class")]
    BadDiagonal(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),
    #[error("circuit {0} is not flippable with the given side present")]
    NotFlippable(String),
    #[error("cannot contract `{0}` at itself")]
    SameLabel(String),
    #[error("kept set must contain the corner base {0}")]
    MissingCornerBase(String),
    #[error("circuit {0} does not contain the apex `{1}`")]
    NotThroughApex(String, String),
    #[error("{0} leaves the contracted configuration")]
    OutOfScope(String),
    #[error("configuration has {points} points (limit {limit}); pass force to enumerate anyway")]
    TooLarge { points: usize, limit: usize },
    #[error("maximal face {0} is affinely dependent")]
    SingularFace(String),
    #[error("link of `{0}` is not isometric to U1- or U1+")]
    NotU1(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("checkpoint {path} was written for a different {what}")]
    CheckpointMismatch { path: PathBuf, what: &'static str },
    #[error("invalid triangulation: {0}")]
    Invalid(#[from] ValidationError),
    #[error("paradox: {0}")]
    Paradox(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
