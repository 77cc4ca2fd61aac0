use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("superluminal velocity: |beta| = {0} must be < 1")]
    Superluminal(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An internal invariant failed beyond its tolerance.
    #[error("numerical consistency error: {0}")]
    Numerical(String),

    #[error("degenerate protocol: success probability {0:e}")]
    Degenerate(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta.abs() >= 1.0 {
        return Err(Error::Superluminal(beta.abs()));
    }
    Ok(())
}
