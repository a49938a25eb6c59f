use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inadmissible Lie type {family}{rank}: {reason}")]
    InadmissibleType {
        family: String,
        rank: usize,
        reason: &'static str,
    },

    #[error("cannot parse Lie type `{0}` (expected e.g. A2, B3, G2)")]
    BadTypeString(String),

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("gamma_{index} = {value} must be greater than -1")]
    GammaOutOfRange { index: usize, value: String },

    #[error("chamber coefficient c_{index} = {value} must be positive")]
    NonPositiveChamber { index: usize, value: String },

    #[error("coweight is not regular: root {root:?} pairs to zero")]
    NotRegular { root: Vec<i64> },

    #[error("Weyl group enumeration exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("representation dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: u64, cap: usize },

    #[error("highest weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("z = {0} lies on the branch cut (closed negative real axis)")]
    OnBranchCut(String),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("invalid Weyl word `{0}`")]
    BadWord(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Whether the error reflects a bug or broken invariant rather than bad
    /// user input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
