use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite sample at {0}")]
    NonFinite(String),

    #[error("singular multiplier `{label}`: F(λ + a) is not finite at λ + a = {shifted}")]
    SingularMultiplier { label: String, shifted: f64 },

    #[error("truncation: {context} (relative energy {energy:.3e} > {tolerance:.1e})")]
    Truncation {
        context: String,
        energy: f64,
        tolerance: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular evaluation: {0}")]
    SingularEvaluation(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("inadmissible exponents: {0}")]
    Inadmissible(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
