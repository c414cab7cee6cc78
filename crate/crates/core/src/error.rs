use thiserror::Error;

use crate::scc::NotMember;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("loop at vertex {0}")]
    Loop(usize),

    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),

    #[error("arc ({tail}, {head}) out of range for {n} vertices")]
    VertexOutOfRange { tail: usize, head: usize, n: usize },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("core digraph is not strongly connected")]
    CoreNotStrong,

    #[error("tree attached to nonexistent core vertex {0}")]
    NoSuchCoreVertex(usize),

    #[error("more than one tree attached to core vertex {0}")]
    DuplicateAttachment(usize),

    #[error("attachment is not a tree: {0}")]
    NotATree(String),

    #[error("alpha = {0} is outside [0, 1)")]
    AlphaOutOfRange(String),

    #[error("digraph has {n} vertices, limit for this operation is {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("root finder did not converge after {iterations} iterations (max residual {max_residual:e})")]
    RootsNotConverged {
        iterations: usize,
        max_residual: f64,
    },

    #[error("not a member of G(n, m): {0}")]
    NotMember(NotMember),

    /// `line` is 1-based; 0 means the input was not a file (e.g. a flag).
    #[error("{}{message}", line_prefix(*line))]
    Parse { line: usize, message: String },
}

fn line_prefix(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!("line {line}: ")
    }
}

impl From<NotMember> for Error {
    fn from(reason: NotMember) -> Self {
        Error::NotMember(reason)
    }
}
