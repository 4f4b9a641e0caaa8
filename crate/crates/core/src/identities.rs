//! Pointwise residuals of the two prime-detecting identities the rest of
//! the crate is built on, plus exhaustive scans.
//!
//! The first identity is `Λ(n) = log n − Σ_{ℓm=n, ℓ,m>1} Λ(ℓ)`, an exact
//! rearrangement of `Σ_{d|n} Λ(d) = log n`. The second is Ramaré's
//! identity for the prime indicator of a squarefree `n ∈ (√x, x]`:
//! `1_P(n) = 1 − Σ_{pm=n, p ≤ √x} 1/ω_{√x}(m)`.

use rayon::prelude::*;

use crate::real::Real;
use crate::sieve::SieveTable;
use crate::sum::{ArgMax, Kahan, DET_CHUNK};
use crate::{Error, Result};

/// Aggregate of a residual scan.
#[derive(Clone, Copy, Debug)]
pub struct IdentityScanReport<T> {
    pub n_max: u64,
    pub max_abs_residual: T,
    pub argmax_n: u64,
    pub count_checked: u64,
}

/// `Λ(n) − (log n − Σ_{ℓm=n, ℓ,m>1} Λ(ℓ))`, which is identically zero.
///
/// Only prime-power divisors `ℓ` contribute to the sum, so it is read off
/// the factorization of `n`: a prime `p` with exponent `e` contributes
/// `e · log p`, minus one `log p` when `n = p^e` itself (that divisor has
/// `m = 1` and is excluded).
pub fn trivial_identity_residual<T: Real>(table: &SieveTable<T>, n: u64) -> Result<T> {
    if n < 1 || n > table.limit() {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            lo: 1,
            hi: table.limit(),
        });
    }
    if n == 1 {
        return Ok(T::zero());
    }
    let factors = table.factor_indexed(n)?;
    let single_prime = factors.len() == 1;
    let mut divisor_sum = Kahan::new();
    for &(idx, e) in &factors {
        let lp = table.prime_log(idx);
        let mut count = e;
        if single_prime {
            count -= 1; // ℓ = n has m = 1, excluded
        }
        for _ in 0..count {
            divisor_sum.add(lp);
        }
    }
    let lambda = table.von_mangoldt(n)?;
    Ok(lambda - (T::ln_u64(n) - divisor_sum.value()))
}

/// Max `|residual|` of the Λ identity over `1 ≤ n ≤ n_max`, with the
/// smallest maximizing `n`.
pub fn scan_trivial_identity<T: Real>(
    table: &SieveTable<T>,
    n_max: u64,
) -> Result<IdentityScanReport<T>> {
    if n_max < 1 || n_max > table.limit() {
        return Err(Error::OutOfRange {
            what: "n_max",
            value: n_max,
            lo: 1,
            hi: table.limit(),
        });
    }
    let starts: Vec<u64> = (1..=n_max).step_by(DET_CHUNK).collect();
    let partials: Vec<ArgMax<T, u64>> = starts
        .par_iter()
        .map(|&s| {
            let e = n_max.min(s + DET_CHUNK as u64 - 1);
            let mut best = ArgMax::new(T::neg_infinity(), s);
            for n in s..=e {
                let r = trivial_identity_residual(table, n)
                    .expect("n within checked range")
                    .abs();
                best.offer(r, n);
            }
            best
        })
        .collect();
    let mut best = ArgMax::new(T::neg_infinity(), 1u64);
    for p in partials {
        best.merge(p);
    }
    Ok(IdentityScanReport {
        n_max,
        max_abs_residual: best.value,
        argmax_n: best.witness,
        count_checked: n_max,
    })
}

/// Residual of Ramaré's identity at a squarefree `n ∈ (√x, x]`:
/// `1_P(n) − (1 − Σ_{pm=n, p ≤ √x} 1/ω_{√x}(m))`.
///
/// The hypotheses (`n` squarefree, `√x < n ≤ x ≤ limit`) are enforced;
/// the identity is simply not asserted outside them.
pub fn ramare_residual<T: Real>(table: &SieveTable<T>, n: u64, x: u64) -> Result<T> {
    if x < 1 || x > table.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            lo: 1,
            hi: table.limit(),
        });
    }
    if n > x || (n as u128) * (n as u128) <= x as u128 {
        return Err(Error::Hypothesis(format!(
            "n = {n} outside (sqrt({x}), {x}]"
        )));
    }
    if table.mobius(n)? == 0 {
        return Err(Error::Hypothesis(format!("n = {n} is not squarefree")));
    }

    let factors = table.factor(n)?;
    // Distinct primes of n that are ≤ √x, i.e. p² ≤ x.
    let small = factors
        .iter()
        .filter(|&&(p, _)| (p as u128) * (p as u128) <= x as u128)
        .count() as u64;
    let mut rhs_sum = Kahan::new();
    for &(p, _) in &factors {
        if (p as u128) * (p as u128) > x as u128 {
            continue;
        }
        // m = n/p is squarefree; its small primes are n's small primes
        // minus p itself, so ω_{√x}(m) = 1 + (small − 1) = small.
        debug_assert!(small >= 1);
        let omega = table.omega_z(n / p, isqrt(x))?;
        debug_assert_eq!(omega as u64, small);
        rhs_sum.add(T::one() / T::of_u64(omega as u64));
    }
    let lhs = if table.is_prime(n) {
        T::one()
    } else {
        T::zero()
    };
    Ok(lhs - (T::one() - rhs_sum.value()))
}

/// Max `|ramare_residual|` over all squarefree `n ∈ (√x, x]`.
pub fn scan_ramare<T: Real>(table: &SieveTable<T>, x: u64) -> Result<IdentityScanReport<T>> {
    if x < 4 || x > table.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            lo: 4,
            hi: table.limit(),
        });
    }
    let lo = isqrt(x) + 1;
    let ns: Vec<u64> = (lo..=x)
        .filter(|&n| table.mobius(n).map(|m| m != 0).unwrap_or(false))
        .collect();
    let partials: Vec<(ArgMax<T, u64>, u64)> = ns
        .par_chunks(DET_CHUNK)
        .map(|chunk| {
            let mut best = ArgMax::new(T::neg_infinity(), chunk[0]);
            for &n in chunk {
                let r = ramare_residual(table, n, x)
                    .expect("hypotheses hold by construction")
                    .abs();
                best.offer(r, n);
            }
            (best, chunk.len() as u64)
        })
        .collect();
    let mut best = ArgMax::new(T::neg_infinity(), lo);
    let mut count = 0;
    for (p, c) in partials {
        best.merge(p);
        count += c;
    }
    Ok(IdentityScanReport {
        n_max: x,
        max_abs_residual: best.value,
        argmax_n: best.witness,
        count_checked: count,
    })
}

/// Integer square root: the largest `r` with `r² ≤ n`.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while (r as u128) * (r as u128) > n as u128 {
        r -= 1;
    }
    while ((r + 1) as u128) * ((r + 1) as u128) <= n as u128 {
        r += 1;
    }
    r
}
