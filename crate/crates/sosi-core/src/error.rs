use thiserror::Error;

/// Errors raised by instance validation, parsing, and size-bounded operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field `{field}`: expected {expected} entries, got {actual}")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("field `p`: processing time of player {player} must be strictly positive, got {value}")]
    NonPositiveProcessingTime { player: usize, value: String },

    #[error("field `w`: weight of player {player} must be nonnegative, got {value}")]
    NegativeWeight { player: usize, value: String },

    #[error("field `{field}`: not a permutation of 1..={n} ({reason})")]
    NotAPermutation {
        field: &'static str,
        n: usize,
        reason: String,
    },

    #[error("field `{field}`: `{text}` is not a rational (expected `a` or `a/b` with b > 0)")]
    InvalidRational { field: &'static str, text: String },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{what} requires n <= {limit}, but the instance has n = {actual}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("players must be distinct, got player {player} twice")]
    DuplicatePlayer { player: usize },

    #[error("player {player} must not be a member of the block")]
    PlayerInBlock { player: usize },

    #[error("subgame requires a nonempty player set")]
    EmptySubgame,

    #[error("invalid generator spec: {0}")]
    InvalidGenSpec(String),

    #[error("player index {index} out of range for n = {n}")]
    PlayerOutOfRange { index: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
