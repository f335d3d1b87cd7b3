use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("boundary coupling c = {0} rejected: only c > 0 gives a Hilbert space and energy estimates (negative c is not supported)")]
    NegativeCoupling(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),

    #[error("position z = {z} lies outside the domain [{lo}, {hi}]")]
    OutsideDomain { z: f64, lo: f64, hi: f64 },

    #[error("root bracket [{lo}, {hi}] for mode {m} shows no sign change")]
    Bracket { m: usize, lo: f64, hi: f64 },

    #[error("norm undefined: {0}")]
    UndefinedNorm(String),

    #[error("CFL condition violated: dt = {dt} exceeds {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("divergent kernel: {0}")]
    Divergent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("bump supports overlap between {first} and {second}")]
    BumpOverlap { first: String, second: String },

    #[error("time grid does not cover the support of the test function: {0}")]
    SupportNotCovered(String),
}

pub type Result<T> = std::result::Result<T, Error>;
