use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter index {index} is outside rank {rank}")]
    LetterOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("rank {0} is not supported (need 2 <= N <= 31)")]
    BadRank(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("the images do not form a basis of F_{0}")]
    NotABasis(usize),

    #[error("the Whitehead graph of the empty word is undefined")]
    EmptyWord,

    #[error("malformed Whitehead move: {0}")]
    MalformedMove(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search budget of {budget} states exceeded in {context}")]
    BudgetExceeded { context: &'static str, budget: usize },

    #[error("k = {k} is out of range for rank {rank} (need 2 <= k < N)")]
    KOutOfRange { k: usize, rank: usize },

    #[error("{0} is not primitive")]
    NotPrimitive(String),

    #[error("vertex is not present in the graph")]
    VertexAbsent,

    #[error("the bases generate different free factors")]
    BasisMismatch,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
