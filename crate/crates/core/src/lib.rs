//! Centre-varying Taylor partial sums at configurable precision.

pub mod decimal;
pub mod error;
pub mod gap;
pub mod scalar;
pub mod report;
pub mod series;
pub mod shift;

pub use error::{Error, Result};
pub use scalar::{Complex, Real, DEFAULT_PRECISION};
pub use series::{PowerSeries, RadiusHint};
pub use shift::ShiftAlgorithm;
