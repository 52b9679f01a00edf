//! Scalar special functions: exponential integral (real and complex),
//! dilogarithm, error functions, inverse hyperbolic tangent and gamma.
//!
//! All functions are pure; there is no global state.

mod dilog;
mod erf;
mod expint;
mod gamma;

pub use dilog::dilog;
pub use erf::{erfc, erfcx, erfcx_complex};
pub use expint::{e1_complex, e1_real, ein_complex};
pub use gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Inverse hyperbolic tangent on `(-1, 1)`.
pub fn arctanh<T: Real>(x: T) -> Result<T> {
    if !(x.abs() < T::one()) {
        return Err(Error::domain("arctanh", format!("|x| must be < 1, got {x}")));
    }
    Ok(x.atanh())
}
