use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} is {got}, which exceeds the limit of {limit}")]
    TooLarge { what: &'static str, got: u64, limit: u64 },

    #[error("vertex {vertex} is out of range for a ground set of {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ground sets differ ({left} vs {right} elements)")]
    GroundSetMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("closure operator is not separable: {a} and {b} are independent but their closures meet")]
    NotSeparable { a: usize, b: usize },

    #[error("words {x:?} and {y:?} are adjacent in the solvability graph")]
    AdjacentWords { x: Vec<u32>, y: Vec<u32> },

    #[error("digraph is not strongly connected")]
    NotStronglyConnected,

    #[error("invalid network ({rule}): {detail}")]
    InvalidNetwork { rule: &'static str, detail: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn too_large(what: &'static str, got: u64, limit: u64) -> Self {
        Error::TooLarge { what, got, limit }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
