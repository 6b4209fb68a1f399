use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An interval touched a singularity or left the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The certified radius is larger than the requested absolute tolerance.
    #[error("tolerance not met: radius {achieved:e} exceeds target {target:e} at {prec_bits} bits")]
    ToleranceNotMet { achieved: f64, target: f64, prec_bits: u32 },

    /// The power-sum constraints required by the exponent degree fail.
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("incompatible specs: {0}")]
    IncompatibleSpecs(String),

    /// Multiple-gamma atoms of level three or more survive reduction.
    #[error("closed form is not reducible to Gamma/G atoms: {0}")]
    IrreducibleClosedForm(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("invalid product spec: {0}")]
    InvalidSpec(String),

    #[error("invalid expression: {0}")]
    InvalidExpression(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
