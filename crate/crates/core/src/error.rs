//! Error type shared by every solver stage.

use thiserror::Error;

/// Errors reported by mesh construction, the solvers and the benchmark driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    Mesh(String),
    #[error("inadmissible state: {0}")]
    Inadmissible(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear solver breakdown after {iterations} iterations")]
    Breakdown { iterations: usize },
    #[error("linear solver did not converge in {iterations} iterations (relative residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("newton iteration did not converge in {iterations} iterations (residual {residual:.3e})")]
    NewtonNotConverged { iterations: usize, residual: f64 },
    #[error("forced time step {tau:.6e} exceeds the admissible bound {bound:.6e}")]
    TimeStep { tau: f64, bound: f64 },
    #[error("limited state violates its local bounds at node {node}")]
    Bounds { node: usize },
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps the error with the name of the stage that produced it.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
