use theta_modular::ModularError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PvError {
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error("quadrature did not converge: {0}")]
    QuadratureDivergence(String),
    #[error("invalid contour plan: {0}")]
    PolePlanInvalid(String),
    #[error("pole at {h} is not simple (|theta'| = {slope:e})")]
    DegeneratePole { h: f64, slope: f64 },
    #[error("enumeration limited to n <= 40, got {0}")]
    ScaleExceeded(u32),
    #[error("{0}")]
    InvalidInput(String),
}
