use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("nominal degrees differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("polynomial is not self-inversive up to a unimodular phase")]
    NotSymmetric,

    #[error("root finder did not converge (backward error {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("root {re} + {im}i is not on the unit circle")]
    NotOnCircle { re: f64, im: f64 },

    #[error("self-inversive phases coincide")]
    PhaseCollision,

    #[error("self-inversive phases differ")]
    PhaseMismatch,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("Re S_k(rz) = {value:e} <= 0 at angle {angle}")]
    PositivityLost { angle: f64, value: f64 },

    #[error("point outside the open unit disk")]
    OutOfDomain,

    #[error("sampler exhausted its rejection budget")]
    SamplerExhausted,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
