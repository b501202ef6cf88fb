use theta_modular::ModularError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymError {
    #[error(transparent)]
    Modular(#[from] ModularError),
    /// The spec is outside the range where the main-term asymptotics apply. It can
    /// still be used for coefficient extraction.
    #[error("window condition fails: {0}")]
    WindowViolation(String),
    #[error("outside the domain: {0}")]
    DomainError(String),
    #[error("argument {re} {im:+}i is outside the sector of the asymptotic expansion")]
    ArgOutOfSector { re: f64, im: f64 },
    #[error("quadrature did not converge: {0}")]
    QuadratureDivergence(String),
}
