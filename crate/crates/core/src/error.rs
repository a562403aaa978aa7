use thiserror::Error;

/// Errors raised by the library. Negative search outcomes (no clique, no
/// factor, no transversal) are not errors; they are reported through the
/// return types of the individual operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("vertex count {n} exceeds the supported maximum of {max}")]
    TooManyVertices { n: usize, max: usize },

    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("color {c} out of range for a collection with {h} colors")]
    ColorOutOfRange { c: usize, h: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex set must be nonempty")]
    EmptySet,

    #[error("vertex sets overlap")]
    Overlap,

    #[error("vertex set {0:?} is not a clique")]
    NotAClique(Vec<usize>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),

    #[error("instance size {size} exceeds the cap {cap} for {what}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    /// A set of edges whose available colors number fewer than the set
    /// itself. `edges` indexes into the caller's edge list.
    #[error("Hall violation: {} edges see only {} colors", edges.len(), colors.len())]
    HallViolation {
        edges: Vec<usize>,
        colors: Vec<usize>,
    },

    #[error("absorber is not resilient: leftover colors {0:?} cannot be absorbed")]
    NotResilient(Vec<usize>),
}

pub type Result<T> = std::result::Result<T, Error>;
