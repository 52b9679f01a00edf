use thiserror::Error;

/// Errors raised by the numerical and combinatorial routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("argument {x} exceeds the solution range (x_max = {x_max})")]
    OutOfRange { x: f64, x_max: f64 },

    #[error("tolerance not achieved: {0}")]
    Tolerance(String),

    #[error("accuracy not reached: estimated error {estimate:e} exceeds {requested:e}")]
    Accuracy { estimate: f64, requested: f64 },

    #[error("method mismatch: {0}")]
    MethodMismatch(String),

    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("coefficient {0} is not an integer")]
    NonInteger(String),

    #[error("rejection budget exhausted: {accepted} of {wanted} samples accepted after {attempts} attempts")]
    BudgetExhausted {
        accepted: u64,
        wanted: u64,
        attempts: u64,
    },
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
