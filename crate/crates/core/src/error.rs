use thiserror::Error;

/// Errors produced by the geometry, sampling and bound routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A cap boundary does not reach the requested circle or meridian.
    #[error("no intersection: {0}")]
    NoIntersection(String),

    #[error("invalid network configuration: {0}")]
    InvalidConfig(String),

    #[error("vertex sets differ ({left} vs {right} vertices)")]
    VertexMismatch { left: usize, right: usize },

    /// The requested coverage target cannot be met on the searched range.
    #[error("coverage target unreachable: need hole proportion <= {required:.6}, best achievable {achievable:.6}")]
    Unreachable { required: f64, achievable: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
