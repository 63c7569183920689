use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid link-strength profile: {0}")]
    InvalidAlpha(String),

    #[error("cannot parse {input:?} as an exact rational")]
    ParseRational { input: String },

    #[error("invalid user subset {subset:?} for K={k}: {reason}")]
    InvalidSubset {
        subset: Vec<usize>,
        k: usize,
        reason: &'static str,
    },

    #[error("J={j} outside [1, {max}] for K={k}")]
    JOutOfRange { j: usize, max: usize, k: usize },

    #[error("bound family needs K >= 3 (got K={0}); use the pair bound for K=2")]
    FamilyNeedsThreeUsers(usize),

    #[error("bound {bound} names user {user} twice")]
    DuplicateUser { bound: usize, user: usize },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("n must be >= 1")]
    InvalidN,

    #[error("eps must be positive")]
    NonPositiveEps,

    #[error("eps={eps} too large: layer {layer} has lambda <= 0 (its pre-eps rate is {limit})")]
    EpsTooLarge { eps: String, layer: usize, limit: String },

    #[error("P must be >= 1 (got {0})")]
    InvalidPower(f64),

    #[error("layer {layer} is out of range for this operation (K={k})")]
    LayerOutOfRange { layer: usize, k: usize },

    #[error("user {user} is not served by layer {layer} (K={k})")]
    UserOutOfRange { user: usize, layer: usize, k: usize },

    #[error("dimension bookkeeping collision: {set} has {got} elements, expected {expected}")]
    Cardinality {
        set: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("channel magnitude bounds must satisfy 0 < h_min < h_max (got {h_min}, {h_max})")]
    ChannelBounds { h_min: f64, h_max: f64 },

    #[error("channel is {got}x{got}, plan expects K={expected}")]
    ChannelSize { got: usize, expected: usize },

    #[error("enumeration of 10^{log10_size:.2} points for user {user}, layer {layer} exceeds the cap of {cap:.3e}")]
    EnumerationCap {
        user: usize,
        layer: usize,
        /// Kept as a logarithm: the sizes overflow f64 easily.
        log10_size: f64,
        cap: f64,
    },

    #[error("receiver {user} has decoded {have} layers, layer {layer} needs {need}")]
    MissingHistory {
        user: usize,
        layer: usize,
        have: usize,
        need: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Coarse classification, used by front ends to pick exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Certification,
    ResourceCap,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Certification(_) | Error::DuplicateUser { .. } | Error::Cardinality { .. } => {
                ErrorKind::Certification
            }
            Error::EnumerationCap { .. } => ErrorKind::ResourceCap,
            _ => ErrorKind::Validation,
        }
    }
}
