use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet rank {0}")]
    InvalidRank(usize),

    #[error("letter index {index} out of range for rank {rank}")]
    LetterOutOfRange { index: usize, rank: usize },

    #[error("alphabet mismatch: rank {left} vs rank {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("cannot parse {what} at {token:?}: {reason}")]
    Parse {
        what: &'static str,
        token: String,
        reason: String,
    },

    #[error("prefix length {m} out of range for word of length {len}")]
    PrefixOutOfRange { m: usize, len: usize },

    #[error("word of length {len} is too short (need at least {min})")]
    WordTooShort { len: usize, min: usize },

    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("operation requires a nontrivial word")]
    TrivialWord,

    #[error("fold violation at vertex {vertex}: two edges labelled {label}")]
    FoldViolation { vertex: usize, label: String },

    #[error("graph is not connected (vertex {0} unreachable from the base)")]
    Disconnected(usize),

    #[error("vertex {0} has degree below 2 and is not the base")]
    NotCore(usize),

    #[error("invalid graph document: {0}")]
    GraphFormat(String),

    #[error("rank mismatch: graph has rank {actual}, expected {expected}")]
    RankMismatch { expected: usize, actual: usize },

    #[error("word {0} is not contained in the subgroup")]
    NotInSubgroup(String),

    #[error("the identity relabeling is not allowed here")]
    IdentityRelabeling,

    #[error("invalid relabeling: {0}")]
    InvalidRelabeling(String),

    #[error("invalid Whitehead automorphism: {0}")]
    InvalidWhitehead(String),

    #[error("{0} is not strictly Whitehead minimal")]
    NotStrictlyMinimal(String),

    #[error("exhaustive relabeling enumeration is limited to rank 8, got rank {0}")]
    RankTooLarge(usize),

    #[error("central decomposition failed: {0}")]
    Decomposition(String),

    #[error("tower construction failed: {0}")]
    Construction(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unknown event {0:?}")]
    UnknownEvent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
