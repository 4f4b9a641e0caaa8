//! Exact experiments with the prime-detecting identity
//! `Λ(n) = log n − Σ_{ℓm=n, ℓ,m>1} Λ(ℓ)`.
//!
//! Summing the identity over integers free of prime factors `≤ y` ("y-rough"
//! integers) splits a weighted sum over primes into a Type I piece (rough
//! prefix sums, expandable over smooth Möbius divisors) and a Type II piece
//! (a bilinear sum handled by dyadic decomposition and Cauchy–Schwarz). The
//! crate computes every term of that decomposition exactly at desk scale,
//! verifies the identity residuals, and runs the corresponding
//! Bombieri–Vinogradov style discrepancy scans over arithmetic progressions.
//!
//! Modules:
//!
//! * [`sieve`] — immutable smallest-prime-factor table with Λ, μ, φ, rough
//!   indicators and smooth squarefree divisor enumeration.
//! * [`identities`] — pointwise residuals of the Λ identity and of Ramaré's
//!   identity, plus exhaustive scans.
//! * [`decomposition`] — the three-term decomposition of
//!   `Σ_{n≤x, p(n)>y} Λ(n)F(n)`, the Type I and Type II maxima, and numeric
//!   checks of every inequality used to bound them.
//! * [`bv`] — ψ/π in progressions, worst-residue discrepancy profiles, the
//!   exact A − B + E split per progression, and the general bilinear-weight
//!   discrepancy evaluation.
//!
//! All floating-point work is generic over the scalar type via [`Real`]
//! (`f32` or `f64`); the `*64` aliases at the crate root are what the
//! command-line front end and the test suites use.

pub mod bv;
pub mod decomposition;
pub mod func;
pub mod identities;
pub mod phase;
pub mod real;
pub mod sieve;
pub mod sum;
pub mod tolerance;

pub use real::Real;

use num_complex::Complex;

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the documented domain of an operation.
    #[error("{what} = {value} out of range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: u64,
        lo: u64,
        hi: u64,
    },
    /// Malformed or inconsistent input that is not a simple range violation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The mathematical hypotheses of an identity do not hold for the input.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    /// An enumeration or allocation exceeded its configured cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A computed residual exceeded the tolerance it is contracted to meet.
    #[error("{what} = {value:e} exceeds tolerance {tolerance:e}")]
    ToleranceExceeded {
        what: &'static str,
        value: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Complex scalar built on the generic real type.
pub type Cx<T> = Complex<T>;

// Concrete aliases for the two supported scalar widths. Everything below is
// just the generic type applied to `f64` (the default for experiments) or
// `f32`.
pub type SieveTable64 = sieve::SieveTable<f64>;
pub type SieveTable32 = sieve::SieveTable<f32>;
pub type TestFunction64 = func::TestFunction<f64>;
pub type TestFunction32 = func::TestFunction<f32>;
pub type DecompositionReport64 = decomposition::DecompositionReport<f64>;
pub type DiscrepancyRecord64 = bv::DiscrepancyRecord<f64>;
pub type BvParameters64 = bv::BvParameters<f64>;
pub type BilinearWeights64 = bv::BilinearWeights<f64>;
pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;
