use thiserror::Error;

use crate::majorization::MajorizationVerdict;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid probability value `{0}`: {1}")]
    InvalidProbability(String, String),
    #[error("entries must sum to exactly 1, got {0}")]
    NotNormalized(String),
    #[error("negative entry {0}")]
    NegativeEntry(String),
    #[error("distribution must have at least one entry")]
    Empty,
    #[error("tensor length {len} does not match shape product {prod}")]
    ShapeMismatch { len: usize, prod: usize },
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("dimension mismatch: {0} vs {1} (pad with zeros first)")]
    DimMismatch(usize, usize),
    #[error("target dimension {target} below current dimension {dim}")]
    PadBelowDim { target: usize, dim: usize },
    #[error("rank(p) = {rank_p} exceeds rank(q) = {rank_q}")]
    RankExceeds { rank_p: usize, rank_q: usize },
    #[error("majorization precondition failed")]
    NotMajorizing(Box<MajorizationVerdict>),
    #[error("distributions are identical up to permutation — relation trivial")]
    IdenticalUpToPermutation,
    #[error("neither distribution has full rank; strip common zeros first")]
    NeitherFullRank,
    #[error("order alpha must not be {0}; use the dedicated tag")]
    ReservedOrder(f64),
    #[error("{0}")]
    Domain(String),
    #[error("search budget exhausted in stage `{0}`")]
    BudgetExhausted(String),
    #[error("no N found up to n_max = {0}")]
    NoNFound(u64),
    #[error("monotonicity violation at sampled points (n = {0})")]
    MonotonicityViolation(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
