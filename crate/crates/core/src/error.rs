use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{what} = {value} exceeds the desk-scale limit {limit}")]
    TooLarge {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("partition sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("budget exceeded: {what} needs {needed}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        limit: u64,
    },
    #[error("character value lift failed: {0}")]
    LiftFailure(String),
    #[error("orthogonality check failed: {0}")]
    Orthogonality(String),
    #[error("constituent strata disagree with labels: {0}")]
    ConstituentMismatch(String),
    #[error("labeling inconsistent: {0}")]
    LabelingInconsistent(String),
    #[error("symmetrized character not constant on a merged class: {0}")]
    NotConstantOnD(String),
    #[error("degenerate weight system: {0}")]
    DegenerateWeights(String),
    #[error("no candidate polynomial for degree {degree}, determinant index {j}")]
    NoCandidate { degree: usize, j: usize },
    #[error("row and column index sets differ in size: {rows} vs {cols}")]
    StrataMismatch { rows: usize, cols: usize },
    #[error("matrix is rank deficient: rank {rank} of {size}")]
    RankDeficient { rank: usize, size: usize },
    #[error("operation requires a labeled character table")]
    LabelingRequired,
    #[error("linear system has no unique solution")]
    SingularSystem,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
