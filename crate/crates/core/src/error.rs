use thiserror::Error;

/// Errors raised by operations of the crossed-product engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operation not supported for {kind} systems: {op}")]
    UnsupportedKind { kind: &'static str, op: &'static str },

    #[error("coefficient model mismatch: {0}")]
    ModelMismatch(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("point {0} is not periodic")]
    Aperiodic(String),

    #[error("element is not self-adjoint (defect {0:e})")]
    NotSelfAdjoint(f64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("improper ideal: {0}")]
    ImproperIdeal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
