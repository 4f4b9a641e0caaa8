//! Immutable arithmetic-function oracle backed by a smallest-prime-factor
//! table.
//!
//! One linear sieve pass fills, for every `n ≤ limit`, the index of the
//! smallest prime factor of `n` in the ascending prime list. Factoring is
//! then repeated division by table lookups, and Λ, μ, φ, rough indicators
//! and smooth-divisor enumeration all ride on that. `log p` is evaluated
//! once per prime and reused, so `Λ(p^k)` is bit-identical to `Λ(p)`.
//!
//! Memory is 4 bytes per sieved integer (one `u32` prime index), so the
//! practical ceiling is governed by RAM: `10^8` costs ~400 MB and is the
//! design target; the hard cap is `u32::MAX`.

use crate::real::Real;
use crate::{Error, Result};

/// Sentinel for entries 0 and 1, which have no prime factor.
const NO_FACTOR: u32 = u32::MAX;

/// Hard limit on the table size (prime indices are stored as `u32`).
pub const MAX_LIMIT: u64 = u32::MAX as u64;

/// Default cap on [`SieveTable::smooth_squarefree_divisors`] output length.
pub const DIVISOR_CAP: usize = 10_000_000;

/// A prime power `p^k` together with the index of `p` in the prime list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub value: u64,
    pub prime_index: u32,
}

/// Immutable factorization oracle for `2 ≤ n ≤ limit`.
///
/// Construction is single-threaded; afterwards the table is never mutated
/// and all queries are pure, so shared references can be used freely from
/// any number of threads.
#[derive(Clone, Debug)]
pub struct SieveTable<T> {
    limit: u64,
    /// `spf_idx[n]` = index into `primes` of the smallest prime factor of
    /// `n`; `NO_FACTOR` for 0 and 1.
    spf_idx: Vec<u32>,
    primes: Vec<u64>,
    prime_logs: Vec<T>,
}

impl<T: Real> SieveTable<T> {
    /// Build the table for `2 ≤ limit ≤ MAX_LIMIT`.
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit > MAX_LIMIT {
            return Err(Error::InvalidArgument(format!(
                "sieve limit {limit} exceeds the supported maximum {MAX_LIMIT}"
            )));
        }
        let n = limit as usize;
        let mut spf_idx: Vec<u32> = Vec::new();
        spf_idx
            .try_reserve_exact(n + 1)
            .map_err(|_| Error::Resource(format!("cannot allocate sieve of size {limit}")))?;
        spf_idx.resize(n + 1, NO_FACTOR);

        // Linear sieve: every composite is marked exactly once, by its
        // smallest prime factor.
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..=n {
            if spf_idx[i] == NO_FACTOR {
                spf_idx[i] = primes.len() as u32;
                primes.push(i as u64);
            }
            let si = spf_idx[i] as usize;
            for (j, &p) in primes.iter().enumerate().take(si + 1) {
                let m = p as usize * i;
                if m > n {
                    break;
                }
                spf_idx[m] = j as u32;
            }
        }

        let prime_logs = primes.iter().map(|&p| T::ln_u64(p)).collect();
        Ok(Self {
            limit,
            spf_idx,
            primes,
            prime_logs,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Ascending list of all primes `≤ limit`.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    /// `log p` for the prime at `prime_index`.
    pub fn prime_log(&self, prime_index: u32) -> T {
        self.prime_logs[prime_index as usize]
    }

    #[inline]
    fn check(&self, what: &'static str, n: u64, lo: u64) -> Result<()> {
        if n < lo || n > self.limit {
            return Err(Error::OutOfRange {
                what,
                value: n,
                lo,
                hi: self.limit,
            });
        }
        Ok(())
    }

    /// Smallest prime factor of `n ≥ 2`.
    pub fn spf(&self, n: u64) -> Result<u64> {
        self.check("n", n, 2)?;
        Ok(self.primes[self.spf_idx[n as usize] as usize])
    }

    /// Deliberately corrupt one stored `log p`, for negative tests of the
    /// invariant machinery.
    #[cfg(test)]
    pub(crate) fn corrupt_prime_log(&mut self, prime_index: usize, value: T) {
        self.prime_logs[prime_index] = value;
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.primes[self.spf_idx[n as usize] as usize] == n
    }

    /// Factorization of `n ≥ 1` as ascending `(prime, exponent)` pairs.
    pub fn factor(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        self.check("n", n, 1)?;
        let mut out = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.primes[self.spf_idx[m as usize] as usize];
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }

    /// Factorization as ascending `(prime_index, exponent)` pairs, for
    /// callers that want `prime_log` lookups without a search.
    pub fn factor_indexed(&self, n: u64) -> Result<Vec<(u32, u32)>> {
        self.check("n", n, 1)?;
        let mut out = Vec::new();
        let mut m = n;
        while m > 1 {
            let idx = self.spf_idx[m as usize];
            let p = self.primes[idx as usize];
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((idx, e));
        }
        Ok(out)
    }

    /// Von Mangoldt Λ(n): `log p` when `n = p^k`, else 0. Λ(1) = 0.
    pub fn von_mangoldt(&self, n: u64) -> Result<T> {
        self.check("n", n, 1)?;
        if n == 1 {
            return Ok(T::zero());
        }
        let idx = self.spf_idx[n as usize];
        let p = self.primes[idx as usize];
        let mut m = n;
        while m.is_multiple_of(p) {
            m /= p;
        }
        if m == 1 {
            Ok(self.prime_logs[idx as usize])
        } else {
            Ok(T::zero())
        }
    }

    /// Möbius μ(n) ∈ {−1, 0, 1}.
    pub fn mobius(&self, n: u64) -> Result<i32> {
        self.check("n", n, 1)?;
        let mut m = n;
        let mut k = 0u32;
        while m > 1 {
            let p = self.primes[self.spf_idx[m as usize] as usize];
            m /= p;
            if m.is_multiple_of(p) {
                return Ok(0);
            }
            k += 1;
        }
        Ok(if k.is_multiple_of(2) { 1 } else { -1 })
    }

    /// Euler totient φ(n).
    pub fn euler_phi(&self, n: u64) -> Result<u64> {
        self.check("n", n, 1)?;
        let mut m = n;
        let mut phi = 1u64;
        while m > 1 {
            let p = self.primes[self.spf_idx[m as usize] as usize];
            let mut pk = 1u64;
            m /= p;
            while m.is_multiple_of(p) {
                m /= p;
                pk *= p;
            }
            phi *= pk * (p - 1);
        }
        Ok(phi)
    }

    /// `1_y(n)`: true iff no prime `≤ y` divides `n`. By convention `n = 1`
    /// is rough for every `y`.
    pub fn is_rough(&self, n: u64, y: u64) -> Result<bool> {
        self.check("n", n, 1)?;
        if y < 1 {
            return Err(Error::InvalidArgument(
                "roughness bound y must be ≥ 1".into(),
            ));
        }
        if n == 1 {
            return Ok(true);
        }
        Ok(self.primes[self.spf_idx[n as usize] as usize] > y)
    }

    /// `ω_z(m) = 1 + #{p ≤ z : p | m}`.
    pub fn omega_z(&self, m: u64, z: u64) -> Result<u32> {
        self.check("m", m, 1)?;
        if z < 1 {
            return Err(Error::InvalidArgument("threshold z must be ≥ 1".into()));
        }
        let mut n = m;
        let mut count = 1u32;
        while n > 1 {
            let p = self.primes[self.spf_idx[n as usize] as usize];
            if p > z {
                break; // divisions yield primes in ascending order
            }
            count += 1;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        Ok(count)
    }

    /// All squarefree integers `d ≤ bound` whose prime factors are all
    /// `≤ y`, ascending, each with its Möbius value. `d = 1` is included.
    pub fn smooth_squarefree_divisors(&self, y: u64, bound: u64) -> Result<Vec<(u64, i8)>> {
        self.smooth_squarefree_divisors_capped(y, bound, DIVISOR_CAP)
    }

    /// As [`smooth_squarefree_divisors`](Self::smooth_squarefree_divisors)
    /// with an explicit cap on the number of divisors enumerated.
    pub fn smooth_squarefree_divisors_capped(
        &self,
        y: u64,
        bound: u64,
        cap: usize,
    ) -> Result<Vec<(u64, i8)>> {
        if y < 1 || bound < 1 {
            return Err(Error::InvalidArgument(
                "smooth divisor enumeration needs y ≥ 1 and bound ≥ 1".into(),
            ));
        }
        let np = self.primes.partition_point(|&p| p <= y);
        let small: &[u64] = &self.primes[..np];
        let mut out: Vec<(u64, i8)> = vec![(1, 1)];
        // Depth-first over the prime set; products stay ≤ bound.
        let mut stack: Vec<(usize, u64, i8)> = vec![(0, 1, 1)];
        while let Some((start, d, mu)) = stack.pop() {
            for (i, &p) in small.iter().enumerate().skip(start) {
                if d > bound / p {
                    break; // primes ascend, so all later products overflow too
                }
                let nd = d * p;
                if out.len() >= cap {
                    return Err(Error::Resource(format!(
                        "more than {cap} smooth squarefree divisors below {bound}; \
                         lower y or raise the cap"
                    )));
                }
                out.push((nd, -mu));
                stack.push((i + 1, nd, -mu));
            }
        }
        out.sort_unstable_by_key(|&(d, _)| d);
        Ok(out)
    }

    /// All prime powers `p^k ≤ bound` (`k ≥ 1`), ascending by value.
    pub fn prime_powers(&self, bound: u64) -> Result<Vec<PrimePower>> {
        self.check("bound", bound, 1)?;
        let mut out = Vec::new();
        for (i, &p) in self.primes.iter().enumerate() {
            if p > bound {
                break;
            }
            let mut v = p;
            loop {
                out.push(PrimePower {
                    value: v,
                    prime_index: i as u32,
                });
                if v > bound / p {
                    break;
                }
                v *= p;
            }
        }
        out.sort_unstable_by_key(|pp| pp.value);
        Ok(out)
    }

    /// Ascending y-rough integers in `[1, hi]` (1 included).
    pub fn rough_up_to(&self, hi: u64, y: u64) -> Result<Vec<u64>> {
        self.check("hi", hi, 1)?;
        let mut out = Vec::new();
        for n in 1..=hi {
            if self.is_rough(n, y)? {
                out.push(n);
            }
        }
        Ok(out)
    }
}
