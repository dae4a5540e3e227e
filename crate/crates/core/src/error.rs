use thiserror::Error;

/// Errors shared across the crate. Operations that can refuse an input
/// (unsupported combinator, budget cap, malformed data) report through
/// this enum; logical outcomes such as "not a member" or "cap exceeded
/// while probing an infinite index" are ordinary return values instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ordinal {0} is not a limit")]
    NotALimit(String),
    #[error("explicit approximation rule has no data for {alpha} at depth {depth}")]
    ExplicitDomainMiss { alpha: String, depth: u64 },
    #[error("set reaches {element}, beyond the extensional ground {ground}")]
    OutOfGround { ground: u32, element: u32 },
    #[error("operation not supported for this spec: {0}")]
    UnsupportedSpec(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("family does not contain the singleton {{{0}}}")]
    FamilyLacksSingletons(u32),
    #[error("norm spec has no layers")]
    EmptyLayers,
    #[error("spec does not have a polyhedral unit ball")]
    NonPolyhedralSpec,
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
