use thiserror::Error;

/// Errors surfaced by construction and induction routines.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: permutation has {perm} symbols, length vector has {lengths}")]
    DimensionMismatch { perm: usize, lengths: usize },

    #[error("bottom row is not a bijection of 1..={n}")]
    NotBijective { n: usize },

    #[error("length at index {index} is not positive")]
    NonPositiveLength { index: usize },

    #[error("permutation is reducible: {{1..={prefix}}} is invariant")]
    Reducible { prefix: usize },

    #[error("point lies outside the domain [0, total)")]
    OutOfDomain,

    #[error("rightmost lengths are equal at induction step {step}; Keane condition fails")]
    RauzyTie { step: u64 },

    #[error("schedule constraint violated: {constraint}")]
    InvalidSchedule { constraint: String },

    #[error("n must be at least 4, got {n}")]
    FamilyTooSmall { n: usize },

    #[error("loop word index k = {k} out of range 2..={max}")]
    LoopIndexOutOfRange { k: usize, max: usize },

    #[error("closed form disagrees with path product at row {row}, col {col}: {closed} vs {path}")]
    OracleMismatch {
        row: usize,
        col: usize,
        closed: String,
        path: String,
    },

    #[error("cycle word does not close: final state differs from the base permutation")]
    NotClosed,

    #[error("index out of range: {what}")]
    IndexOutOfRange { what: String },

    #[error("tail entry is zero at level {level}, interval {interval}")]
    ZeroTail { level: usize, interval: usize },

    #[error("run word parse error: {0}")]
    ParseWord(String),

    #[error("iteration budget exceeded: needed {needed} steps, budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("induced lengths at level {level} disagree with the matrix suffix at interval {interval}")]
    LevelMismatch { level: usize, interval: usize },

    #[error("realized path diverges from the cycle structure after {letters} letters")]
    PathDivergence { letters: String },

    #[error("log comparison undecided at maximum precision ({context})")]
    LogUndecided { context: String },

    #[error("unknown lemma id: {0}")]
    UnknownLemma(String),
}

pub type Result<T> = std::result::Result<T, Error>;
