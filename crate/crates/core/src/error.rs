use thiserror::Error;

use crate::steady_state::SteadyState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed validation; `field` names the offending entry.
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// The classical fixed-point iteration did not settle. The last iterate is
    /// kept so callers can inspect where it wandered (usually a multistable
    /// region).
    #[error("steady state did not converge after {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        last: Box<SteadyState>,
    },

    #[error("drift matrix is not stable (max Re λ = {max_re:e})")]
    Unstable { max_re: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
