use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge ({i}, {j}) for a graph on {n} nodes")]
    InvalidEdge { i: usize, j: usize, n: usize },

    #[error("column index {k} out of range for {n} nodes")]
    InvalidColumn { k: usize, n: usize },

    #[error("node {0} does not exist")]
    UnknownNode(usize),

    #[error("graph series is empty")]
    EmptySeries,

    #[error("graph series needs at least {needed} snapshots, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("node counts must be non-decreasing (n_{t} = {prev} > n_{next_t} = {next})", next_t = .t + 1)]
    ShrinkingSeries { t: usize, prev: usize, next: usize },

    #[error("graph needs at least 2 nodes for {0}")]
    TooFewNodes(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("average new-node degree is undefined: no node arrives after the first snapshot; supply `d_avg`")]
    NoNewNodes,

    #[error("problem has {vars} variables, above the exact solver limit of {limit}")]
    TooLarge { vars: usize, limit: usize },

    #[error("missing degree forecast for node {0}")]
    MissingForecast(usize),

    #[error("cannot delete {requested} edges from a graph with {available}")]
    DeletionExceedsEdges { requested: usize, available: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("input contains no edge events")]
    EmptyInput,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
