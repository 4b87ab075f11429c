use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("invalid coloring: {0}")]
    Coloring(String),
    /// A solver was called outside its precondition.
    #[error("{0}")]
    Contract(String),
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

fn join(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}
