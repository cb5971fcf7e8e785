//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NdsError {
    /// A point or region was combined with a map or space of a different kind.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    /// Inversion was requested for a map that is not a bijection.
    #[error("map is not invertible: {0}")]
    NotInvertible(String),

    /// A window composition mixed maps acting on incompatible spaces.
    #[error("window mixes incompatible space kinds: {0}")]
    HeterogeneousWindow(String),

    /// A periodic reduction was requested for a schedule with no detected period.
    #[error("schedule is not periodic within the searched bound")]
    NotPeriodic,

    /// A classifier was invoked on a sample with horizon zero.
    #[error("index sample has empty horizon")]
    EmptyHorizon,

    /// A detector parameter was out of range.
    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// The requested exact operation is not supported for this combination.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Exact flattening of a piecewise-linear composition failed.
    #[error("cannot flatten composition exactly: {0}")]
    Flatten(String),

    /// A gallery fixture name did not resolve.
    #[error("unknown fixture: {0}")]
    UnknownFixture(String),

    /// A system document or literal failed to parse or validate.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, NdsError>;
