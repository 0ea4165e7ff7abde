use thiserror::Error;

/// Everything that can go wrong while building chains or evaluating them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("digit set is empty")]
    EmptyDigits,

    #[error("digit #{index} is out of range for the bases")]
    DigitOutOfRange { index: usize },

    #[error("digit #{index} has {found} coordinates, expected {expected}")]
    DigitArity {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("bases must be nondecreasing")]
    BasesNotSorted,

    #[error("base {base} at position {index} is smaller than 2")]
    BaseTooSmall { index: usize, base: u32 },

    #[error("a chain needs at least 2 levels, got {rank}")]
    RankTooSmall { rank: usize },

    #[error("level {level} is outside 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("vertex {vertex} has two outgoing edges labelled {label:?}")]
    DuplicateLabelAtVertex { vertex: String, label: Vec<u32> },

    #[error("vertex {vertex} has no outgoing edge")]
    DeadVertex { vertex: String },

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("word is not admissible at level {level}")]
    InadmissibleWord { level: usize },

    #[error("exponent a_{index} = {value} is outside [0, 1]")]
    ExponentOutOfRange { index: usize, value: f64 },

    #[error("expected {expected} exponents, got {found}")]
    ExponentLengthMismatch { expected: usize, found: usize },

    #[error("closed forms only accept window-1 potentials, got window {window}")]
    WindowUnsupported { window: usize },

    #[error("potential window {window} exceeds word length {n}")]
    PotentialWindowTooLarge { window: usize, n: usize },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("enumeration needs {needed} words, budget is {budget}")]
    ComplexityBudgetExceeded { needed: u128, budget: u64 },

    #[error("count matrices share no positive eigenvector")]
    NotAligned,

    #[error("levels above the sofic bottom are not full shifts")]
    UpperLevelsNotFullShift,

    #[error("invalid symbol distribution: {0}")]
    DistributionInvalid(String),

    #[error("optimizer stopped after {iterations} iterations without converging (best value {best_value})")]
    DidNotConverge { iterations: usize, best_value: f64 },

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid configuration: {0}")]
    Validation(String),
}

impl Error {
    /// True for errors caused by bad input rather than by a computation.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::ComplexityBudgetExceeded { .. }
                | Error::NotAligned
                | Error::UpperLevelsNotFullShift
                | Error::DidNotConverge { .. }
                | Error::InadmissibleWord { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
