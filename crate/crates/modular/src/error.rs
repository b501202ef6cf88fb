use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModularError {
    #[error("tau must lie in the upper half plane (im = {im})")]
    InvalidPoint { im: f64 },
    #[error("{what}: truncation budget of {limit} terms does not reach the target error")]
    NonConvergent { what: &'static str, limit: usize },
    #[error("z = {z} is within {guard:e} of a pole of 1/theta(bz; c tau)")]
    PoleProximity { z: f64, guard: f64 },
    #[error("invalid quotient spec: {0}")]
    InvalidSpec(String),
    #[error("outside the domain: {0}")]
    DomainError(String),
}
