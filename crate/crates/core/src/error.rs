use thiserror::Error;

use crate::format::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid graph map: {0}")]
    InvalidMap(String),
    #[error("cannot compose: {0}")]
    Composition(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("not a path: {0}")]
    NotAPath(String),
    #[error("cannot concatenate: {0}")]
    Concat(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("search bound reached without a result: {0}")]
    InternalLimit(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
