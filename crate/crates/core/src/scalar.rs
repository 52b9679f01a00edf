//! Scalar abstraction shared by the numerical modules.
//!
//! Everything numerical in this crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. Accuracy targets quoted in the docs are
//! for `f64`; `f32` instantiations run the same algorithms at single
//! precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, RemAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + RemAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Euler–Mascheroni constant.
    const EULER_GAMMA: Self;

    /// Converts an `f64` literal. Never fails for the two implementors.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest magnitude treated as a genuine nonzero value by the solvers.
    #[inline]
    fn underflow_floor() -> Self {
        Self::lit(1e-300).max(Self::min_positive_value())
    }
}

impl Real for f32 {
    const EULER_GAMMA: f32 = 0.577_215_66;
}

impl Real for f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
}

/// Complex scalar over a [`Real`].
pub type Cplx<T> = Complex<T>;
