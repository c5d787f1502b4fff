use thiserror::Error;

/// Errors shared across the toolkit.
///
/// Mathematical "don't know" answers are not errors; they are encoded in the
/// verdict types. An `Error` always means the request itself cannot be
/// served: malformed input, an unsupported quiver shape, or a blown budget.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    #[error("unknown arrow {0}")]
    UnknownArrow(u32),

    #[error("unbounded path set: a directed cycle lies on a route and no length bound was given")]
    UnboundedPathSet,

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("budget exceeded: needed {needed} but budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("quiver unsupported for this operation: {0}")]
    QuiverUnsupported(String),

    #[error("quiver classifies as Unknown; this operation needs a certified quiver")]
    QuiverUnknown,

    #[error("operation implemented for field coefficients only")]
    NonFieldBase,

    #[error("representation is not injective: {0}")]
    NotInjective(String),

    #[error("tail underspecified: descriptor quivers need a tail rule")]
    TailUnderspecified,

    #[error("unsupported tail kind for this operation: {0}")]
    UnsupportedTail(String),

    #[error("target object fails the local injectivity criteria: {0}")]
    TargetNotInjective(String),

    #[error("no extension exists: {0}")]
    NoExtension(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
