use rug::Float;

use crate::numerics::SummationDiagnostics;

/// Errors raised by the evaluation engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A series ran out of term budget (or had no usable bound) before its tail
    /// dropped below the requested tolerance. The partial value is kept so a
    /// caller can still report it.
    #[error("{context}: not converged ({diagnostics})")]
    NonConvergence {
        context: String,
        partial: Box<Float>,
        diagnostics: Box<SummationDiagnostics>,
    },

    #[error("{value} exceeds the factorization bound {bound}")]
    OutOfRange { value: u64, bound: u64 },

    #[error("cannot pair zeta-product parameters: {0}")]
    Pairing(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
