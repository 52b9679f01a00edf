//! Limit laws for cycles and components of random mappings.
//!
//! The numerical core ([`dde`], [`laplace`], [`distributions`], [`moments`])
//! is generic over [`Real`] (`f32` or `f64`); the aliases below fix `f64`.
//! [`gfseries`] counts exactly over the rationals, and [`mapping_sim`] and
//! [`exact_enum`] check the limits against finite mappings.

pub mod chebyshev;
pub mod dde;
pub mod distributions;
pub mod error;
pub mod exact_enum;
pub mod gfseries;
pub mod laplace;
pub mod mapping_sim;
pub mod moments;
pub mod quad;
pub mod roots;
pub mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Solution = dde::PiecewiseSolution<f64>;
pub type Spec = dde::DdeSpec<f64>;
pub type Laws = distributions::LimitLaws<f64>;
pub type Regime = distributions::Regime<f64>;
pub type Transform = laplace::Transform<f64>;
pub type TransformSpec = laplace::TransformSpec<f64>;
pub type MomentReport = moments::MomentReport<f64>;
