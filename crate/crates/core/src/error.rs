use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid port numbering at vertex {vertex}: {reason}")]
    InvalidPorts { vertex: usize, reason: String },

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("not a covering: {0}")]
    NotCovering(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid permutation assignment: {0}")]
    InvalidAssignment(String),

    #[error("size guard exceeded: {0}")]
    TooLarge(String),

    #[error("unknown builtin graph {name:?}; valid names: {}", valid.join(", "))]
    UnknownBuiltin { name: String, valid: Vec<String> },

    #[error("search budget exhausted")]
    Budget,

    #[error("simulation error: {0}")]
    Simulation(String),

    #[error("replay mismatch at event {index}: {reason}")]
    Replay { index: usize, reason: String },

    #[error("protocol invariant violated: {0}")]
    Protocol(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<crate::Exhausted> for Error {
    fn from(_: crate::Exhausted) -> Self {
        Error::Budget
    }
}
