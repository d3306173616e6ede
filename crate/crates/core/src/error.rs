use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("carrier wavenumbers differ ({sender} vs {receiver}); use the quadrature path")]
    MismatchedCarrier { sender: f64, receiver: f64 },

    #[error("quadrature did not reach tolerance {tol:e} within {max_depth} halvings")]
    QuadratureFailure { tol: f64, max_depth: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("success probability stays below the causal bound on the whole bracket")]
    NoViolation,

    #[error("unknown mode label `{0}`")]
    UnknownMode(String),

    #[error("occupation exceeds truncation n_max = {n_max}")]
    TruncationOverflow { n_max: usize },

    #[error("mirror transmission eta = {0} is outside [0, 1]")]
    InvalidEta(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),
}
