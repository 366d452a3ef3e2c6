use thiserror::Error;

/// Errors produced by the engine and its oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition was violated (wrong mode count, bad grid size).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The truncated Fock representation lost too much weight.
    #[error(
        "Fock oracle did not converge at cutoff {cutoff}: norm deficit {deficit:.3e} exceeds \
         {limit:.0e}; increase the cutoff"
    )]
    NonConvergence { cutoff: usize, deficit: f64, limit: f64 },

    /// A series expansion failed to reach the requested accuracy.
    #[error("series did not converge after {terms} terms")]
    Series { terms: usize },

    /// The integrand produced a non-finite sample.
    #[error("integration error: integrand not finite at {at}")]
    Integration { at: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}
