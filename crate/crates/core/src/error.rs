use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// `N^k` exceeds what the compensated phase path can reduce exactly.
    #[error("precision guard: {n}^{k} exceeds 2^{guard_bits}")]
    Precision { n: u64, k: u32, guard_bits: u32 },

    #[error("grid budget exceeded: need at least {required} points, budget is {budget}")]
    Budget { required: u64, budget: u64 },

    #[error("quadrature did not converge: error estimate {achieved:e} > tol {tol:e} after {panels} panels")]
    Quadrature { achieved: f64, tol: f64, panels: usize },

    #[error("invalid arc center: gcd({q}, {r1}, {rk}) != 1")]
    InvalidCenter { q: u64, r1: i64, rk: i64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
