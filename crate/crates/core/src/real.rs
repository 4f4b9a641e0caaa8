//! Generic scalar trait for the floating-point side of the crate.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
///
/// Integer quantities (indices, moduli, sieve entries) stay concrete; only
/// sums, weights and residuals go through this trait.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 representable as Real")
    }

    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).expect("i64 representable as Real")
    }

    fn of_f64(x: f64) -> Self {
        Self::from_f64(x).expect("f64 representable as Real")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Natural logarithm of an integer, evaluated once through the scalar.
    fn ln_u64(n: u64) -> Self {
        Self::of_u64(n).ln()
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
