use thiserror::Error;

/// Errors produced by the library. CLI exit codes are derived from the variant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("weight dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),
    #[error("no arc from {tail} to {head}")]
    MissingArc { tail: usize, head: usize },
    #[error("node {0} is repeated in path")]
    RepeatedNode(usize),
    #[error("target {t} is unreachable from {s}")]
    Unreachable { s: usize, t: usize },
    #[error("paths do not share endpoints")]
    EndpointMismatch,
    #[error("at least {needed} paths are required, got {got}")]
    TooFewPaths { needed: usize, got: usize },
    #[error("infeasible: requested {requested} units of flow, at most {achievable} possible")]
    Infeasible { requested: u64, achievable: u64 },
    #[error("flow violates conservation at node {0}")]
    NonConserving(usize),
    #[error("sensitive member {0} is not part of the shortest-path DAG")]
    NotInDag(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
