//! Accurate evaluation of `e(t) = exp(2πi t)` at phases of the form
//! `α·k mod 1` for integer `k`.
//!
//! Naively rounding the product `α·k` before reducing mod 1 leaves an
//! absolute phase error of order `|αk|·ε`, which the geometric closed form
//! for phase sums then amplifies by the run length. Splitting the product
//! with a fused multiply-add keeps the reduced phase accurate to ~1 ulp
//! regardless of `k`, so the direct and closed-form routes agree far below
//! the tolerances the oracles assert.

use num_complex::Complex;

use crate::real::Real;

/// `α·k mod 1` with a two-product correction. Result lies in `(-1, 1)`.
#[inline]
pub fn frac_mul<T: Real>(alpha: T, k: u64) -> T {
    frac_mul_signed(alpha, T::of_u64(k))
}

/// `α·d mod 1` for signed `d`.
#[inline]
pub fn frac_mul_i64<T: Real>(alpha: T, d: i64) -> T {
    frac_mul_signed(alpha, T::of_i64(d))
}

#[inline]
fn frac_mul_signed<T: Real>(alpha: T, kf: T) -> T {
    let hi = alpha * kf;
    // Exactly the rounding error of `alpha * kf` (mul_add is exactly
    // rounded, so this is Dekker's two-product residual).
    let lo = alpha.mul_add(kf, -hi);
    (hi.fract() + lo).fract()
}

/// `exp(2πi t)`.
#[inline]
pub fn e2pi<T: Real>(t: T) -> Complex<T> {
    let (s, c) = (t * T::TAU()).sin_cos();
    Complex::new(c, s)
}

/// `e(α·k)` for integer `k`, phase-reduced before the trig call.
#[inline]
pub fn unit_phase<T: Real>(alpha: T, k: u64) -> Complex<T> {
    e2pi(frac_mul(alpha, k))
}

/// Reduce a phase to the balanced interval `[-1/2, 1/2]`.
#[inline]
pub fn balance<T: Real>(t: T) -> T {
    t - t.round()
}
