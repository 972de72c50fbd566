use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("graph is not acyclic")]
    NotADag,
    #[error("capacities are not uniform")]
    NonUniformCapacities,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("terminal {0} is unreachable from the root")]
    UnreachableTerminal(usize),
    #[error("vertex {0} is a non-terminal leaf")]
    NonTerminalLeaf(usize),
    #[error("arc ({0}, {1}) does not belong to the graph")]
    UnknownArc(usize, usize),
    #[error("leaf {leaf} ({kind}) is NP-hard; only the exhaustive oracle applies and it must be requested explicitly")]
    HardLeaf { leaf: u8, kind: &'static str },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    InFile { path: String, source: Box<Error> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
