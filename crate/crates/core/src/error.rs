use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("speed fraction {0} is not subluminal (|beta| must be < 1)")]
    Superluminal(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Convergence { estimate: f64, error_bound: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("fidelity {0} outside [0, 1]; moments are inconsistent")]
    Inconsistent(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
