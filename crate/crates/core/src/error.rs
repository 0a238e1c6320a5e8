use thiserror::Error;

/// Errors produced by network construction, estimation, and testing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,

    #[error("empty node set")]
    EmptyNodeSet,

    #[error("node index {0} out of range (n = {1})")]
    IndexOutOfRange(usize, usize),

    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),

    #[error("negative edge weight {weight} between {src} and {dst}")]
    NegativeWeight { src: usize, dst: usize, weight: f64 },

    #[error("duplicate node id {0}")]
    DuplicateNodeId(i64),

    #[error("ego network empty")]
    EgoNetworkEmpty,

    #[error("unknown author id {0}")]
    UnknownAuthor(i64),

    #[error("insufficient citation activity for author {author} ({side} side)")]
    InsufficientCitations { author: i64, side: &'static str },

    #[error("thresholds eliminate all nodes")]
    ThresholdsEliminateAll,

    #[error("window {start}-{end} outside the data range {lo}-{hi}")]
    WindowOutOfRange { start: i32, end: i32, lo: i32, hi: i32 },

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge probability {value} > 1 at pair ({i}, {j})")]
    ProbabilityAboveOne { i: usize, j: usize, value: f64 },

    #[error("eigensolver failed to converge: worst residual {residual:.3e} after {matvecs} matrix-vector products (tolerance {tolerance:.3e})")]
    EigenNoConvergence { residual: f64, matvecs: usize, tolerance: f64 },

    #[error("embedding dimension zero (K = 1)")]
    EmbeddingDimensionZero,

    #[error("fewer valid embedding rows ({rows}) than requested vertices ({k})")]
    TooFewValidRows { rows: usize, k: usize },

    #[error("degenerate vertex set")]
    DegenerateVertexSet,

    #[error("population model violates a simplex condition: {0}")]
    SimplexCondition(String),

    #[error("network too small for SgnQ (n = {0}, need n >= 5)")]
    NetworkTooSmall(usize),

    #[error("network too large for brute force (n = {0}, limit 14)")]
    BruteForceTooLarge(usize),

    #[error("SgnQ requires a binary graph; found weight {weight} between {src} and {dst}")]
    WeightedGraphRejected { src: usize, dst: usize, weight: f64 },

    #[error("graph has no edges")]
    NoEdges,

    #[error("degenerate eta (|eta|^2 = {0} <= 1)")]
    DegenerateEta(f64),

    #[error("node count mismatch across windows: expected {expected}, window {window} has {actual}")]
    WindowNodeMismatch { expected: usize, window: usize, actual: usize },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Export(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), line, message: message.into() }
    }
}
