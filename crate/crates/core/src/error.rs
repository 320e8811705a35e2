//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("centres differ ({0} vs {1}); recentre one operand first")]
    CentreMismatch(String, String),
    #[error("horizon exceeded: needed coefficient index {needed}, stored horizon {horizon}")]
    Horizon { needed: usize, horizon: usize },
    #[error("series is centred at 0; division by z is singular")]
    SingularCentre,
    #[error("branch domain violated: require |z0| >= r > 0")]
    BranchDomain,
    #[error("point lies outside the declared disc of the series")]
    OutsideDisc,
    #[error("a series needs at least one coefficient")]
    EmptySeries,
    #[error("radius hint must be positive when finite")]
    BadRadius,
    #[error("logarithm of a non-positive real")]
    NonPositiveLog,
    #[error("schedule invariant violated: {0}")]
    Schedule(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("sample point sets do not match")]
    PointSetMismatch,
    #[error("rho must be >= 1")]
    RhoBelowOne,
    #[error("radius estimate unavailable: {0}")]
    RadiusUnavailable(String),
    #[error("coefficient tail diverges at the requested radius")]
    DivergentTail,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
