use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid triangular fuzzy number ({a1}, {a2}, {a3}): need finite a1 <= a2 <= a3")]
    InvalidTfn { a1: f64, a2: f64, a3: f64 },

    #[error("zero area: the fuzzy numbers have no extent")]
    ZeroArea,

    #[error("empty input")]
    EmptyInput,

    #[error("length mismatch: {left} values against {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("operands live on different frames")]
    FrameMismatch,

    #[error("invalid mass assignment: {0}")]
    InvalidMass(String),

    #[error("negative mass {mass} on {focal}")]
    NegativeMass { focal: String, mass: f64 },

    #[error("mass total {total} exceeds 1")]
    MassOverflow { total: f64 },

    #[error("the empty set cannot carry mass")]
    EmptyFocal,

    #[error("total conflict (K = {conflict}); Dempster's rule is undefined")]
    TotalConflict { conflict: f64 },

    #[error("total exclusive conflict (K_D = {conflict}); ECR rule is undefined")]
    TotalExclusiveConflict { conflict: f64 },

    #[error("weights sum to {sum}, expected 1")]
    WeightSumInvalid { sum: f64 },

    #[error("no information: Q(D) = 0, pignistic projection undefined")]
    NoInformation,

    #[error("no votes given")]
    EmptyVotes,

    #[error("invalid non-exclusivity matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("index {index} out of range for {len} strategies")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("criterion `{0}` has a non-positive graded mean")]
    DegenerateWeight(String),

    #[error("invalid evaluation case: {0}")]
    InvalidCase(String),

    #[error("incomplete case coverage, missing: {}", .0.join(", "))]
    IncompleteCoverage(Vec<String>),
}
