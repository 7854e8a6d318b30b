//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("site index {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("invalid chain spec: {0}")]
    InvalidChain(alloc::string::String),

    #[error("operator is not hermitian (residual {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NonUnitary { residual: f64 },

    #[error("integration needs {needed} steps, exceeding the budget of {max}")]
    StepBudget { needed: usize, max: usize },

    #[error("sweep norms are all below the precision floor; slope fit is degenerate")]
    PrecisionFloor,

    #[error("denominator 1 - 16 alpha^2 delta_j^2 vanishes")]
    SingularDenominator,

    #[error("invalid detuning sweep: {0}")]
    InvalidSweep(alloc::string::String),

    #[error("barrier failed to revive (worst leakage {leakage:.3e}); check conventions")]
    RevivalFailure { leakage: f64 },

    #[error("no flat duration on the coarse grid brings the revival error below {threshold}")]
    NoRevivalWindow { threshold: f64 },

    #[error("graph is empty")]
    EmptyGraph,

    #[error("invalid graph: {0}")]
    InvalidGraph(alloc::string::String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(alloc::string::String),
}
