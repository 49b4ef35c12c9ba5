use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("steady state is ambiguous: null space has dimension {dimension}")]
    DegenerateNullSpace { dimension: usize },

    #[error("steady-state solve failed (residual {residual:.3e}): {reason}")]
    Solver { residual: f64, reason: String },

    #[error("state does not have the expected X form (max off-block entry {deviation:.3e})")]
    NotXForm { deviation: f64 },

    #[error("finite-difference step {step:e} is too small relative to {value:e}; use a larger step")]
    StepUnderflow { step: f64, value: f64 },

    #[error("eigenvalue {index} vanishes (p = {p:.3e}) while its derivative is {derivative:.3e}: rank change at this point")]
    RankChange {
        index: usize,
        p: f64,
        derivative: f64,
    },

    #[error("discord optimizer did not converge after {iterations} iterations (best {best:.12}, grid best {grid_best:.12} at theta={grid_theta:.6}, phi={grid_phi:.6})")]
    Optimizer {
        iterations: u64,
        best: f64,
        grid_best: f64,
        grid_theta: f64,
        grid_phi: f64,
    },

    #[error("invalid sweep configuration: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::Config(_) | Error::Domain(_)
        )
    }
}
