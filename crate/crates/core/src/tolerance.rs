//! Central numeric tolerances.
//!
//! Every threshold a report or scan enforces is defined here with its
//! rationale, so tests and the CLI share one policy. All of these are
//! absolute unless stated otherwise; sums with more than ~10^6 terms use
//! the relative form.

/// Identity residual per point: factorizations and logs only, no
/// accumulation to speak of. A few ulps at most.
pub const POINT_RESIDUAL_ABS: f64 = 1e-12;

/// Max identity residual over a full scan to 10^6. Each residual is a
/// handful of log evaluations; 1e-8 leaves ~7 decimal digits of headroom.
pub const IDENTITY_SCAN_ABS: f64 = 1e-8;

/// Relative tolerance for the three-term decomposition residual, scaled by
/// `1 + |log_term|` (the largest term in the identity).
pub const DECOMP_IDENTITY_REL: f64 = 1e-8;

/// Möbius-expanded Type I form versus the direct rough prefix sum.
pub const MOEBIUS_EQ_ABS: f64 = 1e-9;

/// Proof-step equalities (piecewise integral) and inequality slacks
/// (Cauchy–Schwarz per dyadic block, log-term bound).
pub const PROOF_STEP_ABS: f64 = 1e-9;

/// Closed-form geometric phase sums versus direct summation per block.
pub const CLOSED_FORM_ABS: f64 = 1e-9;

/// Ramaré identity residual per point: sums of at most a few reciprocals
/// of small integers.
pub const RAMARE_ABS: f64 = 1e-10;

/// Per-progression `ψ(x;q,a) − (A − B + E)` residual at `x ≤ 10^6`.
pub const ABE_SPLIT_ABS: f64 = 1e-7;

/// Generic compensated-sum agreement for sums with ≤ 10^6 terms.
pub const SUM_ABS_SMALL: f64 = 1e-9;

/// Relative tolerance for compensated sums beyond 10^6 terms.
pub const SUM_REL_LARGE: f64 = 1e-8;
