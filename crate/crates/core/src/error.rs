use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("digit index {index} is beyond the explicit head and the sequence declares no tail")]
    BeyondHead { index: u32 },

    #[error("invalid digit sequence parameter: {0}")]
    BadSequence(String),

    #[error("no integrable tail envelope for {what}; declare an analytic tail")]
    NoTailEnvelope { what: String },

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("system is not a valid contracting family: {reason}")]
    InvalidSystem { reason: String },

    #[error("word enumeration budget exceeded: (K*T)^N = {cost:.3e}; try K <= {suggest_k}, N <= {suggest_n}")]
    EnumerationBudget {
        cost: f64,
        suggest_k: usize,
        suggest_n: usize,
    },

    #[error("regularity is undetermined at interval width {width:.3e}; raise the budget")]
    Undetermined { width: f64 },

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("the two systems do not share digits and rotation count")]
    SpecMismatch,

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("image encoding failure: {0}")]
    Image(String),
}

pub type Result<T> = std::result::Result<T, Error>;
