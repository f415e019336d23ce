use thiserror::Error;

/// Errors produced by the shrinkage library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShrinkError {
    #[error("signal length {0} is not a power of two")]
    NotDyadic(usize),

    #[error("signal must contain at least two samples")]
    TooShort,

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("primary level j0 = {j0} must be below the number of levels J = {levels}")]
    InvalidLevel { j0: usize, levels: usize },

    #[error("level {level} has {found} coefficients, expected {expected}")]
    LevelSizeMismatch {
        level: usize,
        expected: usize,
        found: usize,
    },

    #[error("unknown wavelet basis `{0}` (supported: db1..db10)")]
    UnknownBasis(String),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("level {level} is not above the primary level {j0}")]
    LevelNotAbovePrimary { level: usize, j0: usize },

    #[error("empty coefficient vector")]
    Empty,

    #[error("noise estimate is zero: finest-level details are all zero")]
    ZeroSigma,

    #[error("quadrature produced a non-finite value for {prior} (sigma = {sigma}, d = {d})")]
    Quadrature { prior: String, sigma: f64, d: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown test function `{0}` (expected bumps, blocks, doppler or heavisine)")]
    UnknownTestFunction(String),

    #[error("unknown method `{0}` (valid: CV, SURE, BETASYM, BETAASYM, KUM, TRI, SN)")]
    UnknownMethod(String),

    #[error("signal is constant; its standard deviation is zero")]
    ConstantSignal,

    #[error("replication {replication}, method {method}: {source}")]
    Replication {
        replication: usize,
        method: String,
        #[source]
        source: Box<ShrinkError>,
    },
}

pub type Result<T> = std::result::Result<T, ShrinkError>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ShrinkError::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}
