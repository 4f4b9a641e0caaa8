//! Bombieri–Vinogradov style discrepancy scans: ψ and π over arithmetic
//! progressions, worst-residue discrepancy profiles, the exact per-
//! progression split `ψ(x;q,a) = A − B + E`, and a numeric both-sides
//! evaluation of the general bilinear-weight discrepancy bound.
//!
//! The split comes from summing the Λ identity over y-rough integers of
//! the progression: `A` is the rough log sum, `B` the bilinear sum of
//! `f(n) = Σ_{ℓm=n, ℓ,m>y} Λ(ℓ)1_y(ℓ)·1_y(m)`, and `E` the contribution
//! of powers of primes `≤ y` (including the primes themselves), i.e. all
//! Λ-support the roughness restriction removes.

use num_complex::Complex;
use num_integer::Integer;
use rayon::prelude::*;

use crate::identities::isqrt;
use crate::real::Real;
use crate::sieve::SieveTable;
use crate::sum::{ArgMax, Kahan, KahanComplex};
use crate::{Error, Result};

/// Which counting function the discrepancy scan weights by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Psi,
    Pi,
}

/// Parameters of a discrepancy scan.
///
/// Defaults: `q_max = ⌊√x/(log x)^B⌋` and `y = round(x^{1/log log x})`
/// (natural logs). The theoretical window is `√x/(log x)^B ≤ Q ≤ √x`;
/// since the default is the floor of the left endpoint, validation accepts
/// `Q ≥ ⌊√x/(log x)^B⌋`.
#[derive(Clone, Copy, Debug)]
pub struct BvParameters<T> {
    pub x: u64,
    pub b_exponent: T,
    pub q_max: u64,
    pub y: u64,
    pub weight: Weight,
}

/// `⌊√x / (log x)^B⌋`, clamped to at least 1.
pub fn default_q<T: Real>(x: u64, b_exponent: T) -> u64 {
    let xf = T::of_u64(x);
    let q = xf.sqrt() / xf.ln().powf(b_exponent);
    let q = q.floor().as_f64();
    (q as u64).max(1)
}

/// `round(x^{1/log log x})`, clamped to at least 2.
pub fn default_y(x: u64) -> u64 {
    let xf = x as f64;
    let y = xf.powf(1.0 / xf.ln().ln()).round();
    (y as u64).max(2)
}

impl<T: Real> BvParameters<T> {
    pub fn new(x: u64, b_exponent: T, weight: Weight) -> Result<Self> {
        Self::with_overrides(x, b_exponent, None, None, weight)
    }

    pub fn with_overrides(
        x: u64,
        b_exponent: T,
        q_max: Option<u64>,
        y: Option<u64>,
        weight: Weight,
    ) -> Result<Self> {
        if x < 16 {
            return Err(Error::OutOfRange {
                what: "x",
                value: x,
                lo: 16,
                hi: u64::MAX,
            });
        }
        if b_exponent <= T::zero() {
            return Err(Error::InvalidArgument("exponent B must be positive".into()));
        }
        let q_lo = default_q(x, b_exponent);
        let q_hi = isqrt(x);
        let q_max = q_max.unwrap_or(q_lo);
        if q_max < q_lo.min(q_hi) || q_max > q_hi {
            return Err(Error::OutOfRange {
                what: "q_max",
                value: q_max,
                lo: q_lo.min(q_hi),
                hi: q_hi,
            });
        }
        let y = y.unwrap_or_else(|| default_y(x));
        if y < 2 {
            return Err(Error::InvalidArgument("y must be at least 2".into()));
        }
        Ok(Self {
            x,
            b_exponent,
            q_max,
            y,
            weight,
        })
    }

    /// `u` with `x/Q = y^u`.
    pub fn u_parameter(&self) -> T {
        T::of_u64(self.x / self.q_max).ln() / T::of_u64(self.y).ln()
    }
}

/// Worst-residue discrepancy for one modulus, with the A − B + E split
/// (always the ψ-based split) evaluated at the worst residue.
#[derive(Clone, Copy, Debug)]
pub struct DiscrepancyRecord<T> {
    pub q: u64,
    pub a_worst: u64,
    pub discrepancy: T,
    pub a_term: T,
    pub b_term: T,
    pub e_term: T,
}

/// The three components of `ψ(x;q,a) = A − B + E`.
#[derive(Clone, Copy, Debug)]
pub struct AbeSplit<T> {
    pub a_term: T,
    pub b_term: T,
    pub e_term: T,
}

impl<T: Real> AbeSplit<T> {
    pub fn combined(&self) -> T {
        self.a_term - self.b_term + self.e_term
    }
}

fn check_x<T: Real>(table: &SieveTable<T>, x: u64) -> Result<()> {
    if x < 1 || x > table.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            lo: 1,
            hi: table.limit(),
        });
    }
    Ok(())
}

fn check_qa(q: u64, a: u64) -> Result<()> {
    if q < 1 {
        return Err(Error::InvalidArgument("modulus q must be ≥ 1".into()));
    }
    if a >= q {
        return Err(Error::OutOfRange {
            what: "a",
            value: a,
            lo: 0,
            hi: q - 1,
        });
    }
    Ok(())
}

/// `ψ(x;q,a) = Σ_{n≤x, n≡a (q)} Λ(n)` by direct summation over prime
/// powers in ascending order.
pub fn psi_progression<T: Real>(table: &SieveTable<T>, x: u64, q: u64, a: u64) -> Result<T> {
    check_x(table, x)?;
    check_qa(q, a)?;
    let mut s = Kahan::new();
    for pp in table.prime_powers(x)? {
        if pp.value % q == a {
            s.add(table.prime_log(pp.prime_index));
        }
    }
    Ok(s.value())
}

/// `π(x;q,a)`: primes `p ≤ x` with `p ≡ a (mod q)`.
pub fn pi_progression<T: Real>(table: &SieveTable<T>, x: u64, q: u64, a: u64) -> Result<u64> {
    check_x(table, x)?;
    check_qa(q, a)?;
    Ok(table
        .primes()
        .iter()
        .take_while(|&&p| p <= x)
        .filter(|&&p| p % q == a)
        .count() as u64)
}

/// Exact split `ψ(x;q,a) = A − B + E` at roughness threshold `y ≥ 2`:
///
/// * `A = Σ_{n≤x, n≡a, p(n)>y} log n`
/// * `B = Σ_{n≡a} Σ_{ℓm=n, ℓ,m>y rough} Λ(ℓ)`
/// * `E = Σ_{p≤y} Σ_{p^k≤x, p^k≡a} log p`
pub fn abe_split<T: Real>(
    table: &SieveTable<T>,
    x: u64,
    q: u64,
    a: u64,
    y: u64,
) -> Result<AbeSplit<T>> {
    check_x(table, x)?;
    check_qa(q, a)?;
    if y < 2 {
        return Err(Error::InvalidArgument("y must be at least 2".into()));
    }

    // A: rough log sum over the progression.
    let mut a_sum = Kahan::new();
    let mut n = if a == 0 { q } else { a };
    while n <= x {
        if table.is_rough(n, y)? {
            a_sum.add(T::ln_u64(n));
        }
        match n.checked_add(q) {
            Some(next) => n = next,
            None => break,
        }
    }

    // B: pairs ℓ (rough prime power) × m (rough, > y) with ℓm ≡ a.
    let mut b_sum = Kahan::new();
    let ell_bound = x / (y + 1);
    if ell_bound > y {
        let rough_m = table.rough_up_to(ell_bound, y)?;
        for pp in table.prime_powers(ell_bound)? {
            let p = table.primes()[pp.prime_index as usize];
            if p <= y {
                continue;
            }
            let lam = table.prime_log(pp.prime_index);
            let er = pp.value % q;
            let m_hi = x / pp.value;
            let cut = rough_m.partition_point(|&m| m <= m_hi);
            for &m in &rough_m[..cut] {
                if m > y && er * (m % q) % q == a {
                    b_sum.add(lam);
                }
            }
        }
    }

    // E: powers of primes ≤ y in the progression.
    let mut e_sum = Kahan::new();
    for (i, &p) in table.primes().iter().enumerate() {
        if p > y || p > x {
            break;
        }
        let lp = table.prime_log(i as u32);
        let mut v = p;
        loop {
            if v % q == a {
                e_sum.add(lp);
            }
            if v > x / p {
                break;
            }
            v *= p;
        }
    }

    Ok(AbeSplit {
        a_term: a_sum.value(),
        b_term: b_sum.value(),
        e_term: e_sum.value(),
    })
}

/// One record per modulus `q ≤ q_max`: the worst reduced residue (smallest
/// on ties), its discrepancy against the weight's mean over reduced
/// residues, and the A − B + E split at that residue.
///
/// The global total `W(x)` used in `W(x)/φ(q)` is re-summed from the
/// per-residue buckets of each `q`, so the `q = 1` record is exactly zero.
pub fn discrepancy_profile<T: Real>(
    table: &SieveTable<T>,
    params: &BvParameters<T>,
) -> Result<Vec<DiscrepancyRecord<T>>> {
    check_x(table, params.x)?;
    if params.q_max > table.limit() {
        return Err(Error::OutOfRange {
            what: "q_max",
            value: params.q_max,
            lo: 1,
            hi: table.limit(),
        });
    }
    let pps = table.prime_powers(params.x)?;
    let qs: Vec<u64> = (1..=params.q_max).collect();
    let records: Vec<Result<DiscrepancyRecord<T>>> = qs
        .par_iter()
        .map(|&q| {
            let phi = table.euler_phi(q)?;
            let (worst_a, disc) = match params.weight {
                Weight::Psi => {
                    let mut buckets = vec![Kahan::<T>::new(); q as usize];
                    for pp in &pps {
                        buckets[(pp.value % q) as usize].add(table.prime_log(pp.prime_index));
                    }
                    let mut total = Kahan::new();
                    for b in &buckets {
                        total.add(b.value());
                    }
                    let mean = total.value() / T::of_u64(phi);
                    let mut best = ArgMax::new(T::neg_infinity(), 0u64);
                    for a in 0..q {
                        if a.gcd(&q) == 1 {
                            best.offer((buckets[a as usize].value() - mean).abs(), a);
                        }
                    }
                    (best.witness, best.value)
                }
                Weight::Pi => {
                    let mut buckets = vec![0u64; q as usize];
                    let mut total = 0u64;
                    for &p in table.primes().iter().take_while(|&&p| p <= params.x) {
                        buckets[(p % q) as usize] += 1;
                        total += 1;
                    }
                    let mean = T::of_u64(total) / T::of_u64(phi);
                    let mut best = ArgMax::new(T::neg_infinity(), 0u64);
                    for a in 0..q {
                        if a.gcd(&q) == 1 {
                            best.offer((T::of_u64(buckets[a as usize]) - mean).abs(), a);
                        }
                    }
                    (best.witness, best.value)
                }
            };
            let abe = abe_split(table, params.x, q, worst_a, params.y)?;
            Ok(DiscrepancyRecord {
                q,
                a_worst: worst_a,
                discrepancy: disc,
                a_term: abe.a_term,
                b_term: abe.b_term,
                e_term: abe.e_term,
            })
        })
        .collect();
    records.into_iter().collect()
}

/// The scan statistic and its normalizations.
#[derive(Clone, Copy, Debug)]
pub struct BvStatistic<T> {
    /// `Σ_{q≤Q} max_{(a,q)=1} |W(x;q,a) − W(x)/φ(q)|` for the scan weight.
    pub lhs: T,
    /// ψ-weight normalization `lhs / (Q √x (log x) (log log x)^{1/2})`.
    pub normalized_psi: Option<T>,
    /// π-weight normalization `lhs / (Q √x (log log x)^{1/2})`.
    pub normalized_pi: Option<T>,
}

/// Fold already-computed records into the normalized statistic.
pub fn bv_statistic_from_records<T: Real>(
    records: &[DiscrepancyRecord<T>],
    params: &BvParameters<T>,
) -> Result<BvStatistic<T>> {
    if params.x < 16 {
        return Err(Error::OutOfRange {
            what: "x",
            value: params.x,
            lo: 16,
            hi: u64::MAX,
        });
    }
    let mut lhs = Kahan::new();
    for r in records {
        lhs.add(r.discrepancy);
    }
    let lhs = lhs.value();
    let xf = T::of_u64(params.x);
    let qf = T::of_u64(params.q_max);
    let loglog = xf.ln().ln().sqrt();
    let (normalized_psi, normalized_pi) = match params.weight {
        Weight::Psi => (Some(lhs / (qf * xf.sqrt() * xf.ln() * loglog)), None),
        Weight::Pi => (None, Some(lhs / (qf * xf.sqrt() * loglog))),
    };
    Ok(BvStatistic {
        lhs,
        normalized_psi,
        normalized_pi,
    })
}

/// Run the profile and fold it into the statistic.
pub fn bv_statistic<T: Real>(
    table: &SieveTable<T>,
    params: &BvParameters<T>,
) -> Result<BvStatistic<T>> {
    let records = discrepancy_profile(table, params)?;
    bv_statistic_from_records(&records, params)
}

/// Bilinear weight sequences `α`, `β` with their exact mean-square
/// constants: `a_const` is the smallest `a` with `Σ_{ℓ≤L}|α_ℓ|² ≤ aL`
/// for every integer `L ≤ x`, and likewise `b_const` for `β`.
#[derive(Clone, Debug)]
pub struct BilinearWeights<T: Real> {
    alpha: Vec<(u64, Complex<T>)>,
    beta: Vec<(u64, Complex<T>)>,
    pub a_const: T,
    pub b_const: T,
}

fn mean_square_constant<T: Real>(support: &[(u64, Complex<T>)]) -> T {
    // Σ|w|²/L is maximized at support points: the numerator is a step
    // function and the ratio decays between steps.
    let mut prefix = Kahan::new();
    let mut best = T::zero();
    for &(pos, w) in support {
        prefix.add(w.norm_sqr());
        best = best.max(prefix.value() / T::of_u64(pos));
    }
    best
}

fn validate_support<T: Real>(name: &str, support: &mut [(u64, Complex<T>)], x: u64) -> Result<()> {
    support.sort_unstable_by_key(|&(pos, _)| pos);
    for w in support.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::InvalidArgument(format!(
                "{name} support has a duplicate entry at {}",
                w[0].0
            )));
        }
    }
    if let Some(&(first, _)) = support.first() {
        if first < 1 {
            return Err(Error::InvalidArgument(format!(
                "{name} support must start at 1 or later"
            )));
        }
    }
    if let Some(&(last, _)) = support.last() {
        if last > x {
            return Err(Error::OutOfRange {
                what: "support position",
                value: last,
                lo: 1,
                hi: x,
            });
        }
    }
    Ok(())
}

impl<T: Real> BilinearWeights<T> {
    /// Build from explicit `(position, value)` lists supported in `[1, x]`.
    pub fn new(
        mut alpha: Vec<(u64, Complex<T>)>,
        mut beta: Vec<(u64, Complex<T>)>,
        x: u64,
    ) -> Result<Self> {
        validate_support("alpha", &mut alpha, x)?;
        validate_support("beta", &mut beta, x)?;
        let a_const = mean_square_constant(&alpha);
        let b_const = mean_square_constant(&beta);
        Ok(Self {
            alpha,
            beta,
            a_const,
            b_const,
        })
    }

    /// The weights of the ψ split: `α_ℓ = Λ(ℓ)1_y(ℓ)` on `(y, x/y]` and
    /// `β_m = 1_y(m)` on `(y, x]`, so `f(n) = Σ α_ℓ β_m` is the bilinear
    /// term `B` of [`abe_split`].
    pub fn rough_lambda_weights(table: &SieveTable<T>, x: u64, y: u64) -> Result<Self> {
        check_x(table, x)?;
        if y < 2 || y >= x {
            return Err(Error::OutOfRange {
                what: "y",
                value: y,
                lo: 2,
                hi: x - 1,
            });
        }
        let one = Complex::new(T::one(), T::zero());
        let mut alpha = Vec::new();
        if x / y > y {
            for pp in table.prime_powers(x / y)? {
                let p = table.primes()[pp.prime_index as usize];
                if p > y && pp.value > y {
                    alpha.push((
                        pp.value,
                        Complex::new(table.prime_log(pp.prime_index), T::zero()),
                    ));
                }
            }
        }
        let beta: Vec<(u64, Complex<T>)> = table
            .rough_up_to(x, y)?
            .into_iter()
            .filter(|&m| m > y)
            .map(|m| (m, one))
            .collect();
        Self::new(alpha, beta, x)
    }

    pub fn alpha(&self) -> &[(u64, Complex<T>)] {
        &self.alpha
    }

    pub fn beta(&self) -> &[(u64, Complex<T>)] {
        &self.beta
    }

    /// Smallest α support point (the `L_0` of the support condition).
    pub fn alpha_support_min(&self) -> Option<u64> {
        self.alpha.first().map(|&(pos, _)| pos)
    }

    /// Number of `(ℓ, m)` pairs with `ℓm ≤ x`.
    pub fn pair_count(&self, x: u64) -> u64 {
        let mut count = 0u64;
        for &(ell, _) in &self.alpha {
            count += self.beta.partition_point(|&(m, _)| m <= x / ell) as u64;
        }
        count
    }

    /// `Σ_{n≤x, n≡a (q)} f(n)` with `f(n) = Σ_{ℓm=n} α_ℓ β_m`.
    pub fn progression_sum(&self, x: u64, q: u64, a: u64) -> Result<Complex<T>> {
        check_qa(q, a)?;
        let mut s = KahanComplex::new();
        for &(ell, av) in &self.alpha {
            let cut = self.beta.partition_point(|&(m, _)| m <= x / ell);
            for &(m, bv) in &self.beta[..cut] {
                if (ell % q) * (m % q) % q == a {
                    s.add(av * bv);
                }
            }
        }
        Ok(s.value())
    }
}

/// Both sides of the bilinear discrepancy bound.
#[derive(Clone, Copy, Debug)]
pub struct BilinearDiscrepancy<T> {
    /// `Σ_{q≤Q} max_{(a,q)=1} |Σ_{n≡a} f(n) − (1/φ(q)) Σ_{(n,q)=1} f(n)|`.
    pub lhs: T,
    /// `(a_const·b_const)^{1/2} · Q · x^{1/2} · log x`.
    pub rhs: T,
    /// `lhs/rhs` (0 when `rhs = 0`); recorded only, the bound's constant
    /// is implicit.
    pub ratio: T,
}

/// Default budget for `pairs × Q` in [`bilinear_discrepancy`].
pub const PAIR_BUDGET: u64 = 2_000_000_000;

/// Evaluate both sides of the bilinear discrepancy bound for explicit
/// weights. Errors with [`Error::Resource`] if `pairs × q_max` exceeds
/// the budget.
pub fn bilinear_discrepancy<T: Real>(
    table: &SieveTable<T>,
    weights: &BilinearWeights<T>,
    x: u64,
    q_max: u64,
    budget: Option<u64>,
) -> Result<BilinearDiscrepancy<T>> {
    check_x(table, x)?;
    if q_max < 1 || q_max > table.limit() {
        return Err(Error::OutOfRange {
            what: "q_max",
            value: q_max,
            lo: 1,
            hi: table.limit(),
        });
    }
    let pairs = weights.pair_count(x);
    let budget = budget.unwrap_or(PAIR_BUDGET);
    if pairs.saturating_mul(q_max) > budget {
        return Err(Error::Resource(format!(
            "{pairs} pairs × {q_max} moduli exceeds the budget of {budget} operations"
        )));
    }

    let qs: Vec<u64> = (1..=q_max).collect();
    let maxima: Vec<Result<T>> = qs
        .par_iter()
        .map(|&q| {
            let phi = table.euler_phi(q)?;
            let mut buckets = vec![KahanComplex::<T>::new(); q as usize];
            for &(ell, av) in &weights.alpha {
                let cut = weights.beta.partition_point(|&(m, _)| m <= x / ell);
                let er = ell % q;
                for &(m, bv) in &weights.beta[..cut] {
                    buckets[(er * (m % q) % q) as usize].add(av * bv);
                }
            }
            let mut coprime_total = KahanComplex::new();
            for a in 0..q {
                if a.gcd(&q) == 1 {
                    coprime_total.add(buckets[a as usize].value());
                }
            }
            let mean = coprime_total.value().unscale(T::of_u64(phi));
            let mut best = T::zero();
            for a in 0..q {
                if a.gcd(&q) == 1 {
                    best = best.max((buckets[a as usize].value() - mean).norm());
                }
            }
            Ok(best)
        })
        .collect();
    let mut lhs = Kahan::new();
    for m in maxima {
        lhs.add(m?);
    }
    let lhs = lhs.value();
    let rhs = (weights.a_const * weights.b_const).sqrt()
        * T::of_u64(q_max)
        * T::of_u64(x).sqrt()
        * T::ln_u64(x);
    let ratio = if rhs > T::zero() {
        lhs / rhs
    } else {
        T::zero()
    };
    Ok(BilinearDiscrepancy { lhs, rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance;

    fn table(limit: u64) -> SieveTable<f64> {
        SieveTable::build(limit).unwrap()
    }

    /// Independent Λ via trial factorization.
    fn lambda_trial(n: u64) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                while m.is_multiple_of(d) {
                    m /= d;
                }
                return if m == 1 { (d as f64).ln() } else { 0.0 };
            }
            d += 1;
        }
        (m as f64).ln() // n itself prime
    }

    #[test]
    fn psi_progression_examples() {
        let t = table(1000);
        let got = psi_progression(&t, 10, 1, 0).unwrap();
        let want = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((got - want).abs() < 1e-12);

        let got = psi_progression(&t, 20, 4, 1).unwrap();
        let want = 5f64.ln() + 3f64.ln() + 13f64.ln() + 17f64.ln();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn psi_progression_large_fixture() {
        // Frozen from a high-precision independent computation; also
        // cross-checked against a trial-factorization oracle here.
        let t = table(1_000_000);
        let got = psi_progression(&t, 1_000_000, 101, 7).unwrap();
        assert!((got - 10_006.398_090_834_451).abs() < 1e-6, "got={got}");
        let mut oracle = 0.0f64;
        let mut n = 7u64;
        while n <= 1_000_000 {
            oracle += lambda_trial(n);
            n += 101;
        }
        assert!((got - oracle).abs() < 1e-7);
    }

    #[test]
    fn pi_progression_examples() {
        let t = table(1_000_000);
        assert_eq!(pi_progression(&t, 20, 4, 3).unwrap(), 4);
        assert_eq!(pi_progression(&t, 20, 4, 1).unwrap(), 3);
        // Frozen from an independent primality-count oracle.
        assert_eq!(pi_progression(&t, 1_000_000, 3, 1).unwrap(), 39_231);
    }

    #[test]
    fn progression_ops_reject_bad_arguments() {
        let t = table(100);
        assert!(psi_progression(&t, 101, 1, 0).is_err());
        assert!(psi_progression(&t, 50, 0, 0).is_err());
        assert!(psi_progression(&t, 50, 5, 5).is_err());
        assert!(pi_progression(&t, 50, 5, 7).is_err());
    }

    #[test]
    fn abe_split_e_term_example() {
        // Prime powers of p ≤ 5 that are ≡ 1 (mod 3) and ≤ 100: 4, 16, 64, 25.
        let t = table(1000);
        let abe = abe_split(&t, 100, 3, 1, 5).unwrap();
        let want = 3.0 * 2f64.ln() + 5f64.ln();
        assert!((abe.e_term - want).abs() < 1e-12);
    }

    #[test]
    fn abe_split_closes_to_psi() {
        let t = table(1000);
        for (x, q, a, y) in [
            (100u64, 1u64, 0u64, 2u64),
            (100, 3, 1, 5),
            (1000, 7, 3, 10),
            (1000, 4, 1, 2),
            (999, 5, 2, 31),
        ] {
            let abe = abe_split(&t, x, q, a, y).unwrap();
            let psi = psi_progression(&t, x, q, a).unwrap();
            assert!(
                (abe.combined() - psi).abs() <= tolerance::ABE_SPLIT_ABS,
                "x={x} q={q} a={a} y={y}"
            );
        }
    }

    #[test]
    fn abe_split_with_y_at_least_x_is_pure_e() {
        let t = table(1000);
        let abe = abe_split(&t, 100, 3, 2, 200).unwrap();
        assert_eq!(abe.a_term, 0.0);
        assert_eq!(abe.b_term, 0.0);
        let psi = psi_progression(&t, 100, 3, 2).unwrap();
        assert!((abe.e_term - psi).abs() < 1e-12);
    }

    #[test]
    fn orthogonality_of_progressions() {
        let t = table(100_000);
        let x = 50_000u64;
        let psi_x = psi_progression(&t, x, 1, 0).unwrap();
        for q in [2u64, 3, 12, 97] {
            let mut s = 0.0;
            for a in 0..q {
                s += psi_progression(&t, x, q, a).unwrap();
            }
            assert!((s - psi_x).abs() < 1e-8, "q={q}");
        }
    }

    #[test]
    fn pi_weight_consistency() {
        let t = table(100_000);
        let x = 50_000u64;
        let pi_x = pi_progression(&t, x, 1, 0).unwrap();
        for q in [2u64, 6, 30, 97] {
            let mut s = 0u64;
            for a in 0..q {
                if a.gcd(&q) == 1 {
                    s += pi_progression(&t, x, q, a).unwrap();
                }
            }
            let dividing = t
                .primes()
                .iter()
                .take_while(|&&p| p <= x)
                .filter(|&&p| q % p == 0)
                .count() as u64;
            assert_eq!(s, pi_x - dividing, "q={q}");
        }
    }

    #[test]
    fn default_parameters() {
        // y = round(x^{1/log log x}) with natural logs: 111 at x = 10^5.
        assert_eq!(default_y(100_000), 111);
        // Q = floor(sqrt(x)/log x) at B = 1.
        assert_eq!(default_q(100_000, 1.0f64), 27);
        assert_eq!(default_q(1_000_000, 1.0f64), 72);
        let p = BvParameters::new(100_000, 1.0f64, Weight::Psi).unwrap();
        assert_eq!(p.q_max, 27);
        assert_eq!(p.y, 111);
        assert!(p.u_parameter() > 0.0);
    }

    #[test]
    fn parameter_validation() {
        assert!(BvParameters::new(10, 1.0f64, Weight::Psi).is_err());
        assert!(
            BvParameters::with_overrides(100_000, 1.0f64, Some(1_000), None, Weight::Psi).is_err()
        );
        assert!(
            BvParameters::with_overrides(100_000, 1.0f64, Some(316), None, Weight::Psi).is_ok()
        );
        assert!(BvParameters::with_overrides(100_000, 1.0f64, None, Some(1), Weight::Psi).is_err());
        assert!(BvParameters::with_overrides(100_000, -1.0f64, None, None, Weight::Psi).is_err());
    }

    #[test]
    fn profile_q1_is_exactly_zero() {
        let t = table(10_000);
        let params =
            BvParameters::with_overrides(10_000, 1.0f64, Some(10), None, Weight::Psi).unwrap();
        let records = discrepancy_profile(&t, &params).unwrap();
        assert_eq!(records[0].q, 1);
        assert_eq!(records[0].a_worst, 0);
        assert_eq!(records[0].discrepancy, 0.0);
    }

    #[test]
    fn profile_matches_brute_force_oracle() {
        let t = table(10_000);
        let x = 10_000u64;
        let params = BvParameters::with_overrides(x, 1.0f64, Some(100), None, Weight::Psi).unwrap();
        let records = discrepancy_profile(&t, &params).unwrap();
        assert_eq!(records.len(), 100);
        for &q in &[2u64, 10, 97] {
            // Oracle: ψ(x;q,a) for every a by trial factorization.
            let mut buckets = vec![0.0f64; q as usize];
            for n in 1..=x {
                buckets[(n % q) as usize] += lambda_trial(n);
            }
            let total: f64 = buckets.iter().sum();
            let phi = t.euler_phi(q).unwrap() as f64;
            let mut best = (-1.0f64, 0u64);
            for a in 0..q {
                if a.gcd(&q) == 1 {
                    let d = (buckets[a as usize] - total / phi).abs();
                    if d > best.0 {
                        best = (d, a);
                    }
                }
            }
            let rec = records[(q - 1) as usize];
            assert_eq!(rec.q, q);
            assert_eq!(rec.a_worst, best.1, "q={q}");
            assert!((rec.discrepancy - best.0).abs() < 1e-7, "q={q}");
            // The ABE invariant at the worst residue.
            let psi = psi_progression(&t, x, q, rec.a_worst).unwrap();
            let combined = rec.a_term - rec.b_term + rec.e_term;
            assert!((psi - combined).abs() <= tolerance::ABE_SPLIT_ABS);
        }
    }

    #[test]
    fn pi_weight_profile_matches_brute_force_oracle() {
        let t = table(10_000);
        let x = 10_000u64;
        let params = BvParameters::with_overrides(x, 1.0f64, Some(50), None, Weight::Pi).unwrap();
        let records = discrepancy_profile(&t, &params).unwrap();
        // Independent oracle: trial-division prime counts per residue.
        let is_prime_trial = |n: u64| {
            if n < 2 {
                return false;
            }
            let mut d = 2;
            while d * d <= n {
                if n.is_multiple_of(d) {
                    return false;
                }
                d += 1;
            }
            true
        };
        let primes: Vec<u64> = (2..=x).filter(|&n| is_prime_trial(n)).collect();
        for &q in &[1u64, 4, 30, 47] {
            let mut buckets = vec![0u64; q as usize];
            for &p in &primes {
                buckets[(p % q) as usize] += 1;
            }
            let phi = t.euler_phi(q).unwrap() as f64;
            let mut best = (-1.0f64, 0u64);
            for a in 0..q {
                if a.gcd(&q) == 1 {
                    let d = (buckets[a as usize] as f64 - primes.len() as f64 / phi).abs();
                    if d > best.0 {
                        best = (d, a);
                    }
                }
            }
            let rec = records[(q - 1) as usize];
            assert_eq!(rec.a_worst, best.1, "q={q}");
            assert!((rec.discrepancy - best.0).abs() < 1e-9, "q={q}");
        }
        assert_eq!(records[0].discrepancy, 0.0);
    }

    #[test]
    fn statistic_of_no_records_is_zero() {
        let params = BvParameters::new(100_000, 1.0f64, Weight::Psi).unwrap();
        let s = bv_statistic_from_records::<f64>(&[], &params).unwrap();
        assert_eq!(s.lhs, 0.0);
        assert_eq!(s.normalized_psi, Some(0.0));
    }

    #[test]
    fn statistic_is_monotone_in_q() {
        let t = table(10_000);
        let mk = |qm: u64| {
            BvParameters::with_overrides(10_000, 1.0f64, Some(qm), None, Weight::Psi).unwrap()
        };
        let lhs_at = |qm: u64| bv_statistic(&t, &mk(qm)).unwrap().lhs;
        let mut prev = lhs_at(10);
        for qm in [20u64, 50, 100] {
            let cur = lhs_at(qm);
            assert!(cur + 1e-9 >= prev, "qm={qm}");
            prev = cur;
        }
    }

    #[test]
    fn statistic_populates_matching_normalization() {
        let t = table(10_000);
        let psi_params =
            BvParameters::with_overrides(10_000, 1.0f64, Some(20), None, Weight::Psi).unwrap();
        let s = bv_statistic(&t, &psi_params).unwrap();
        assert!(s.normalized_psi.is_some() && s.normalized_pi.is_none());
        assert!(s.normalized_psi.unwrap().is_finite());

        let pi_params =
            BvParameters::with_overrides(10_000, 1.0f64, Some(20), None, Weight::Pi).unwrap();
        let s = bv_statistic(&t, &pi_params).unwrap();
        assert!(s.normalized_pi.is_some() && s.normalized_psi.is_none());
    }

    #[test]
    fn zero_alpha_gives_zero_lhs() {
        let t = table(1000);
        let w =
            BilinearWeights::<f64>::new(vec![], vec![(2, Complex::new(1.0, 0.0))], 1000).unwrap();
        let d = bilinear_discrepancy(&t, &w, 1000, 10, None).unwrap();
        assert_eq!(d.lhs, 0.0);
        assert_eq!(d.ratio, 0.0);
    }

    #[test]
    fn single_spike_matches_brute_force() {
        let t = table(1000);
        let x = 1000u64;
        let y = 5u64;
        let ell0 = 13u64;
        let one = Complex::new(1.0f64, 0.0);
        let beta: Vec<(u64, Complex<f64>)> = (y + 1..=x).map(|m| (m, one)).collect();
        let w = BilinearWeights::new(vec![(ell0, one)], beta, x).unwrap();
        let d = bilinear_discrepancy(&t, &w, x, 8, None).unwrap();

        // Brute force: f(n) = 1 when ℓ0 | n and n/ℓ0 ∈ (y, x], else 0.
        let mut lhs = 0.0f64;
        for q in 1..=8u64 {
            let mut buckets = vec![0.0f64; q as usize];
            for m in y + 1..=x / ell0 {
                buckets[((ell0 * m) % q) as usize] += 1.0;
            }
            let phi = t.euler_phi(q).unwrap() as f64;
            let coprime_total: f64 = (0..q)
                .filter(|a| a.gcd(&q) == 1)
                .map(|a| buckets[a as usize])
                .sum();
            let mut best = 0.0f64;
            for a in 0..q {
                if a.gcd(&q) == 1 {
                    best = best.max((buckets[a as usize] - coprime_total / phi).abs());
                }
            }
            lhs += best;
        }
        assert!((d.lhs - lhs).abs() < 1e-9);
    }

    #[test]
    fn mean_square_constants_are_tight() {
        let one = Complex::new(1.0f64, 0.0);
        // β ≡ 1 on [1, 100]: Σ_{m≤M}|β|² = M exactly, so b = 1.
        let beta: Vec<(u64, Complex<f64>)> = (1..=100).map(|m| (m, one)).collect();
        let w = BilinearWeights::new(vec![(1, one)], beta, 100).unwrap();
        assert!((w.b_const - 1.0).abs() < 1e-15);
        // A single spike of weight 3 at position 2: sup is 9/2.
        let w2 =
            BilinearWeights::new(vec![(2, Complex::new(3.0, 0.0))], vec![(1, one)], 100).unwrap();
        assert!((w2.a_const - 4.5).abs() < 1e-15);
    }

    #[test]
    fn rough_lambda_weights_reproduce_b_term() {
        let t = table(2000);
        let (x, y) = (2000u64, 10u64);
        let w = BilinearWeights::rough_lambda_weights(&t, x, y).unwrap();
        assert_eq!(w.alpha_support_min(), Some(11));
        for (q, a) in [(3u64, 1u64), (7, 2), (10, 9)] {
            let via_weights = w.progression_sum(x, q, a).unwrap();
            let abe = abe_split(&t, x, q, a, y).unwrap();
            assert!((via_weights.re - abe.b_term).abs() < 1e-10, "q={q} a={a}");
            assert!(via_weights.im.abs() < 1e-15);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let t = table(1000);
        let w = BilinearWeights::rough_lambda_weights(&t, 1000, 5).unwrap();
        let err = bilinear_discrepancy(&t, &w, 1000, 10, Some(10));
        assert!(matches!(err, Err(Error::Resource(_))));
    }

    #[test]
    fn weights_reject_duplicates_and_out_of_range() {
        let one = Complex::new(1.0f64, 0.0);
        assert!(BilinearWeights::new(vec![(5, one), (5, one)], vec![], 100).is_err());
        assert!(BilinearWeights::new(vec![(101, one)], vec![], 100).is_err());
    }
}
