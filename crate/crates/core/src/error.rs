use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A weight fell outside the half-open interval (0, 1].
    #[error("weight #{index} = {value} is outside (0,1]; every weight must satisfy 0 < a_i <= 1")]
    WeightOutOfRange { index: usize, value: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("weight vector is empty; n must be at least 1")]
    EmptyWeights,

    #[error("n = {0} exceeds the supported maximum of 63 points")]
    TooManyPoints(usize),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("weight vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("weight #{index} of the target ({target}) exceeds the source ({source_weight})")]
    NotDominated {
        index: usize,
        target: String,
        source_weight: String,
    },

    #[error("the kept label set of a forgetful morphism must be nonempty")]
    EmptyKept,

    #[error("mustata weights need 0 <= k < n (got n = {n}, k = {k})")]
    InvalidMustata { n: usize, k: usize },

    #[error("order is not admissible: {0}")]
    InadmissibleOrder(String),

    #[error("enumeration over {size} elements exceeds the cap of {cap}")]
    EnumerationCap { size: usize, cap: usize },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("stage index {index} out of range (building set has {len} elements)")]
    StageOutOfRange { index: usize, len: usize },

    #[error("center index {center} must come strictly after stage {stage}")]
    IndexOrder { stage: usize, center: usize },

    #[error("grading violation: {0}")]
    Grading(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid presentation data: {0}")]
    InvalidPresentation(String),

    #[error("unsupported base dimension m = {0}; m must be at least 1")]
    InvalidBaseDimension(i64),
}

impl Error {
    /// True for failures caused by a configured size or resource limit.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::EnumerationCap { .. } | Error::ResourceCap(_))
    }
}
