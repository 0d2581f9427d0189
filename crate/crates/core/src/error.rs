use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Domain { field: &'static str, reason: String },

    #[error("{what} out of range: {reason}")]
    Range { what: &'static str, reason: String },

    #[error("{0}")]
    Parity(String),

    #[error("inverse iteration stalled at relative residual {residual:.3e} after {iterations} iterations")]
    Convergence { residual: f64, iterations: usize },

    #[error("F'(x) does not change sign on ({lo}, {hi}); shifted harmonic approximation inapplicable")]
    NoBracket { lo: f64, hi: f64 },

    #[error("non-positive SHA coefficient at x0 = {x0}: A = {kinetic}, B = {stiffness}")]
    NegativeCurvature { x0: f64, kinetic: f64, stiffness: f64 },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("enumeration of {count} levels exceeds the cap of {cap}")]
    EnumerationCap { count: u128, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
