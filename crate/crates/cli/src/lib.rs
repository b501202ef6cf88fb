//! Configuration-driven experiments comparing exact Fourier coefficients of
//! theta quotients with their asymptotic main terms, and a property suite
//! that runs the invariants of every layer.

pub mod config;
pub mod experiment;
pub mod properties;

use thiserror::Error;

pub use config::ExperimentConfig;
pub use experiment::{run_ratio_experiment, write_csv, ExperimentOutput, ResultRow, RowOutcome};
pub use properties::{run_property_suite, PropertyReport, Verdict};

/// Environment variable that overrides the configured thread count.
pub const THREADS_ENV: &str = "THETA_ASYM_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration, spec or arguments.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Numeric or property failure.
    #[error("{0}")]
    Failure(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

/// Thread count: an explicit request wins, then the environment, then the config.
pub fn resolve_threads(explicit: Option<usize>, configured: usize) -> Result<usize, CliError> {
    if let Some(n) = explicit {
        return if n > 0 { Ok(n) } else { Err(CliError::Config("--threads must be positive".into())) };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(configured),
    }
}

pub(crate) fn pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| CliError::Failure(format!("thread pool: {e}")))
}
