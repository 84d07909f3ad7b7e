//! Error types shared across the solver.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("grid: {0}")]
    Grid(String),

    #[error("mesh: {0}")]
    Mesh(String),

    #[error("config: {0}")]
    Config(String),

    #[error("linear solver: {0}")]
    Solver(String),

    #[error("rigid body: {0}")]
    Body(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub fn grid(msg: impl Into<String>) -> Self {
        SimError::Grid(msg.into())
    }
    pub fn mesh(msg: impl Into<String>) -> Self {
        SimError::Mesh(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        SimError::Config(msg.into())
    }
    pub fn solver(msg: impl Into<String>) -> Self {
        SimError::Solver(msg.into())
    }
    pub fn body(msg: impl Into<String>) -> Self {
        SimError::Body(msg.into())
    }
    pub fn invariant(msg: impl Into<String>) -> Self {
        SimError::Invariant(msg.into())
    }
}
