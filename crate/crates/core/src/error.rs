use thiserror::Error;

/// Errors raised by the geometric pipelines.
///
/// Emptiness of a no-silhouette region is never an error: it is reported as
/// `None` by the seed search and as a distinct value by clipping.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("curve is not immersed at s = {s}: |r'(s)| = {speed:e}")]
    Immersion { s: f64, speed: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inconsistent construction: {0}")]
    Inconsistent(String),

    #[error("empty intersection: {0}")]
    EmptyIntersection(String),

    #[error("invalid support function: {0}")]
    InvalidSupport(String),

    #[error("point lies outside the northern chart: {0}")]
    OutsideChart(String),

    #[error("point coincides with a pole of the sphere map")]
    Pole,

    #[error("set is not hemispherical")]
    NotHemispherical,

    #[error("no-silhouette is empty at theta = {theta}")]
    EmptyAtStart { theta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
