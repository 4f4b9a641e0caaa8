//! Three-term decomposition of `Σ_{n≤x, p(n)>y} Λ(n)F(n)` and the Type I /
//! Type II quantities that bound it.
//!
//! Summing the Λ identity over y-rough `n ≤ x` gives, exactly,
//!
//! ```text
//! Σ_{n≤x, p(n)>y} Λ(n)F(n)
//!     = Σ_{n≤x, p(n)>y} F(n) log n                        (log term)
//!     − Σ_{ℓ: p(ℓ)>y} Λ(ℓ) Σ_{y<m≤x/ℓ, p(m)>y} F(ℓm)      (bilinear term)
//! ```
//!
//! where the inner `m` runs over rough integers `> y` (a rough integer
//! larger than 1 automatically exceeds y, so this matches the `ℓ,m > 1`
//! constraint of the identity). The log term is controlled by the Type I
//! maximum `S_I = max_{t≤x} |Σ_{n≤t, p(n)>y} F(n)|`, which expands over
//! smooth squarefree Möbius divisors; the bilinear term is controlled by
//! the Type II maximum `S_II` after dyadic decomposition and
//! Cauchy–Schwarz. Everything here is computed, not estimated, and every
//! inequality used along the way can be checked numerically via
//! [`proof_step_checks`].

use num_complex::Complex;
use rayon::prelude::*;

use crate::func::TestFunction;
use crate::phase::{balance, e2pi, frac_mul, frac_mul_i64};
use crate::real::Real;
use crate::sieve::{PrimePower, SieveTable};
use crate::sum::{sum_complex_par, sum_complex_range, ArgMax, Kahan, KahanComplex};
use crate::tolerance;
use crate::{Error, Result};

/// Dyadic grid and roughness flags for the Type II scan.
///
/// The maximum over real block starts `L` is approximated on the grid
/// `L = y·2^j ≤ x/y`; results are labelled grid-restricted. The `m` and
/// inner `n` variables are restricted to y-rough integers by default.
#[derive(Clone, Debug)]
pub struct TypeIiConfig {
    pub ell_blocks: Vec<u64>,
    pub rough_m: bool,
    pub rough_n: bool,
}

impl TypeIiConfig {
    /// `L ∈ {y·2^j : y·2^j ≤ x/y}`; empty when `y² > x`.
    pub fn default_grid(x: u64, y: u64) -> Vec<u64> {
        let mut grid = Vec::new();
        let cap = x / y;
        let mut ell = y;
        while ell <= cap {
            grid.push(ell);
            match ell.checked_mul(2) {
                Some(next) => ell = next,
                None => break,
            }
        }
        grid
    }

    pub fn new(x: u64, y: u64) -> Self {
        Self {
            ell_blocks: Self::default_grid(x, y),
            rough_m: true,
            rough_n: true,
        }
    }
}

/// Result of the Type II scan: the maximum and its smallest witness in
/// lexicographic `(L, m)` order. `vacuous` marks an empty grid (`y² > x`).
#[derive(Clone, Copy, Debug)]
pub struct TypeIiResult<T> {
    pub value: T,
    pub arg_l: u64,
    pub arg_m: u64,
    pub vacuous: bool,
}

/// All terms of the decomposition for one `(F, x, y)`.
#[derive(Clone, Debug)]
pub struct DecompositionReport<T> {
    pub x: u64,
    pub y: u64,
    pub true_sum: Complex<T>,
    pub log_term: Complex<T>,
    pub bilinear_term: Complex<T>,
    /// `|true_sum − (log_term − bilinear_term)|`.
    pub identity_residual: T,
    pub s1_value: T,
    pub s1_argmax_t: u64,
    /// Möbius-divisor majorant of the rough prefix sum at `s1_argmax_t`.
    pub s1_divisor_form: T,
    pub s2_value: T,
    pub s2_arg_l: u64,
    pub s2_arg_m: u64,
    pub s2_vacuous: bool,
    /// `2·S_I·log x + sqrt(S_II · x · (log x)^5)`.
    pub bound_value: T,
    /// `|true_sum| / bound_value` (0 when the bound is 0). Recorded only;
    /// the inequality carries an implicit constant, so no pass/fail.
    pub ratio: T,
}

/// One named inequality or equality check from the decomposition's proof.
/// Equalities are encoded as `lhs = |difference|, rhs = 0`, so in all cases
/// the contract is `slack = rhs − lhs ≥ −tolerance`.
#[derive(Clone, Debug)]
pub struct ProofStepCheck<T> {
    pub name: String,
    pub lhs: T,
    pub rhs: T,
    pub slack: T,
}

/// Options for [`proposition_report_with`].
#[derive(Clone, Debug)]
pub struct ReportOptions<T> {
    /// Residual allowance, relative to `1 + |log_term|`.
    pub identity_rel_tol: T,
}

impl<T: Real> Default for ReportOptions<T> {
    fn default() -> Self {
        Self {
            identity_rel_tol: T::of_f64(tolerance::DECOMP_IDENTITY_REL),
        }
    }
}

fn check_xy<T: Real>(table: &SieveTable<T>, x: u64, y: u64) -> Result<()> {
    if x < 2 || x > table.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            lo: 2,
            hi: table.limit(),
        });
    }
    if y < 1 || y >= x {
        return Err(Error::OutOfRange {
            what: "y",
            value: y,
            lo: 1,
            hi: x - 1,
        });
    }
    Ok(())
}

/// Prime powers `ℓ ≤ bound` with `p(ℓ) > y`, ascending.
fn rough_prime_powers<T: Real>(
    table: &SieveTable<T>,
    bound: u64,
    y: u64,
) -> Result<Vec<PrimePower>> {
    if bound < 1 {
        return Ok(Vec::new());
    }
    Ok(table
        .prime_powers(bound)?
        .into_iter()
        .filter(|pp| table.primes()[pp.prime_index as usize] > y)
        .collect())
}

/// `Σ_{n≤x, p(n)>y} Λ(n)F(n)` by direct summation over prime powers —
/// the reference value the decomposition must reproduce.
pub fn true_rough_prime_sum<T: Real>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    x: u64,
    y: u64,
) -> Result<Complex<T>> {
    check_xy(table, x, y)?;
    let pps = rough_prime_powers(table, x, y)?;
    Ok(sum_complex_par(&pps, |pp| {
        f.eval(pp.value).scale(table.prime_log(pp.prime_index))
    }))
}

/// `Σ_{n≤x, p(n)>y} F(n) log n` (the `n = 1` term contributes 0).
pub fn rough_log_sum<T: Real>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    x: u64,
    y: u64,
) -> Result<Complex<T>> {
    check_xy(table, x, y)?;
    Ok(sum_complex_range(1, x, |n| {
        if table.is_rough(n, y).expect("n ≤ x ≤ limit") {
            f.eval(n).scale(T::ln_u64(n))
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }))
}

/// `Σ_{ℓ: p(ℓ)>y} Λ(ℓ) Σ_{y<m≤x/ℓ, p(m)>y} F(ℓm)`.
///
/// `m = 1` is excluded: among rough integers, `m > 1` and `m > y` coincide,
/// and the exclusion is what makes the three-term identity exact.
pub fn bilinear_sum<T: Real>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    x: u64,
    y: u64,
) -> Result<Complex<T>> {
    check_xy(table, x, y)?;
    if x / (y + 1) < y + 1 {
        // No pair ℓ, m > y with ℓm ≤ x exists.
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let ells = rough_prime_powers(table, x / (y + 1), y)?;
    let rough_m = table.rough_up_to(x / (y + 1), y)?;
    let partials: Vec<Complex<T>> = ells
        .par_chunks(16)
        .map(|chunk| {
            let mut acc = KahanComplex::new();
            for pp in chunk {
                let ell = pp.value;
                let m_hi = x / ell;
                let cut = rough_m.partition_point(|&m| m <= m_hi);
                let mut inner = KahanComplex::new();
                for &m in &rough_m[..cut] {
                    if m > y {
                        inner.add(f.eval(ell * m));
                    }
                }
                acc.add(inner.value().scale(table.prime_log(pp.prime_index)));
            }
            acc.value()
        })
        .collect();
    let mut acc = KahanComplex::new();
    for v in partials {
        acc.add(v);
    }
    Ok(acc.value())
}

/// `S_I = max_{t≤x} |Σ_{n≤t, p(n)>y} F(n)|` with the smallest maximizing
/// `t`, by a sequential compensated prefix scan.
pub fn type_i<T: Real>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    x: u64,
    y: u64,
) -> Result<(T, u64)> {
    check_xy(table, x, y)?;
    let mut prefix = KahanComplex::new();
    let mut best = ArgMax::new(T::neg_infinity(), 1u64);
    for n in 1..=x {
        if table.is_rough(n, y)? {
            prefix.add(f.eval(n));
        }
        best.offer(prefix.value().norm_sqr(), n);
    }
    Ok((best.value.max(T::zero()).sqrt(), best.witness))
}

/// Möbius expansion of the rough prefix sum at `t`:
/// `Σ_{d squarefree, P(d)≤y, d≤t} μ(d) Σ_{m≤t/d} F(dm)`, together with the
/// absolute-value majorant `Σ_d |Σ_{m≤t/d} F(dm)|`.
///
/// The expanded value must equal `Σ_{n≤t, p(n)>y} F(n)`; the majorant
/// dominates `S_I` when evaluated at the maximizing `t`.
pub fn type_i_moebius_expansion<T: Real>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    t: u64,
    y: u64,
) -> Result<(Complex<T>, T)> {
    if t < 1 || t > table.limit() {
        return Err(Error::OutOfRange {
            what: "t",
            value: t,
            lo: 1,
            hi: table.limit(),
        });
    }
    let divisors = table.smooth_squarefree_divisors(y, t)?;
    let inner: Vec<(Complex<T>, i8)> = divisors
        .par_chunks(16)
        .flat_map_iter(|chunk| {
            chunk.iter().map(|&(d, mu)| {
                let mut s = KahanComplex::new();
                let mut v = d;
                while v <= t {
                    s.add(f.eval(v));
                    v += d;
                }
                (s.value(), mu)
            })
        })
        .collect();
    let mut value = KahanComplex::new();
    let mut majorant = Kahan::new();
    for (s, mu) in inner {
        if mu >= 0 {
            value.add(s);
        } else {
            value.add(-s);
        }
        majorant.add(s.norm());
    }
    Ok((value.value(), majorant.value()))
}

/// Bounds of the inner `ℓ` range of a Type II cell: `(lo, hi]` with
/// `lo = L`, `hi = min(2L, x/m, x/n)`.
#[inline]
fn cell_ell_range(x: u64, ell_block: u64, m: u64, n: u64) -> (u64, u64) {
    let hi = (2 * ell_block).min(x / m).min(x / n);
    (ell_block, hi)
}

/// Direct inner sum `Σ_{L<ℓ≤hi} F(ℓm) conj(F(ℓn))`.
#[inline]
fn cell_inner_sum<T: Real>(f: &TestFunction<T>, lo: u64, hi: u64, m: u64, n: u64) -> Complex<T> {
    let mut s = KahanComplex::new();
    for ell in (lo + 1)..=hi {
        s.add(f.eval(ell * m) * f.eval(ell * n).conj());
    }
    s.value()
}

/// `S_II` over the dyadic grid:
/// `max_{L, y<m≤2x/L} Σ_{m/2<n≤2m} |Σ_{L<ℓ≤2L, ℓ≤x/m, ℓ≤x/n} F(ℓm) conj(F(ℓn))|`
/// with `m` (and the inner `n`) restricted to rough integers when the
/// config says so.
pub fn type_ii<T: Real>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    x: u64,
    y: u64,
    cfg: &TypeIiConfig,
) -> Result<TypeIiResult<T>> {
    check_xy(table, x, y)?;
    if cfg.ell_blocks.is_empty() {
        return Ok(TypeIiResult {
            value: T::zero(),
            arg_l: 0,
            arg_m: 0,
            vacuous: true,
        });
    }
    let mut global = ArgMax::new(T::neg_infinity(), (0u64, 0u64));
    for &lb in &cfg.ell_blocks {
        let m_hi = 2 * x / lb;
        let ms: Vec<u64> = (y + 1..=m_hi)
            .filter(|&m| !cfg.rough_m || table.is_rough(m, y).unwrap_or(false))
            .collect();
        let partials: Vec<ArgMax<T, (u64, u64)>> = ms
            .par_chunks(64)
            .map(|chunk| {
                let mut best = ArgMax::new(T::neg_infinity(), (lb, chunk[0]));
                for &m in chunk {
                    let mut row = Kahan::new();
                    let n_lo = m / 2 + 1;
                    let n_hi = (2 * m).min(x); // ℓ ≥ 1 forces n ≤ x anyway
                    for n in n_lo..=n_hi {
                        if cfg.rough_n && !table.is_rough(n, y).unwrap_or(false) {
                            continue;
                        }
                        let (lo, hi) = cell_ell_range(x, lb, m, n);
                        if hi > lo {
                            row.add(cell_inner_sum(f, lo, hi, m, n).norm());
                        }
                    }
                    best.offer(row.value(), (lb, m));
                }
                best
            })
            .collect();
        for p in partials {
            global.merge(p);
        }
    }
    if global.value == T::neg_infinity() {
        // Grid present but no admissible m at all.
        return Ok(TypeIiResult {
            value: T::zero(),
            arg_l: cfg.ell_blocks[0],
            arg_m: 0,
            vacuous: false,
        });
    }
    Ok(TypeIiResult {
        value: global.value,
        arg_l: global.witness.0,
        arg_m: global.witness.1,
        vacuous: false,
    })
}

/// Visit every Type II cell `(L, m, n)` of the grid in deterministic
/// order, handing the caller the inner ℓ-range and the directly summed
/// inner value. Diagnostic hook used by the closed-form phase oracle.
pub fn visit_type_ii_inner_sums<T: Real, V>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    x: u64,
    y: u64,
    cfg: &TypeIiConfig,
    mut visit: V,
) -> Result<()>
where
    V: FnMut(u64, u64, u64, u64, u64, Complex<T>),
{
    check_xy(table, x, y)?;
    for &lb in &cfg.ell_blocks {
        let m_hi = 2 * x / lb;
        for m in y + 1..=m_hi {
            if cfg.rough_m && !table.is_rough(m, y)? {
                continue;
            }
            let n_hi = (2 * m).min(x);
            for n in m / 2 + 1..=n_hi {
                if cfg.rough_n && !table.is_rough(n, y)? {
                    continue;
                }
                let (lo, hi) = cell_ell_range(x, lb, m, n);
                if hi > lo {
                    visit(lb, m, n, lo, hi, cell_inner_sum(f, lo, hi, m, n));
                }
            }
        }
    }
    Ok(())
}

/// Closed-form `Σ_{lo<ℓ≤hi} e(αℓm) conj(e(αℓn))` for the exponential
/// phase: a geometric series in `e(α(m−n))`. Independent of the direct
/// route, so it serves as a correctness oracle for the Type II inner sums.
pub fn closed_form_phase_inner_sum<T: Real>(
    alpha: T,
    m: u64,
    n: u64,
    lo: u64,
    hi: u64,
) -> Complex<T> {
    if hi <= lo {
        return Complex::new(T::zero(), T::zero());
    }
    let count = hi - lo;
    let delta = m as i64 - n as i64;
    let theta = balance(frac_mul_i64(alpha, delta));
    if theta == T::zero() {
        return Complex::new(T::of_u64(count), T::zero());
    }
    let first = e2pi(frac_mul(theta, lo + 1));
    let one = Complex::new(T::one(), T::zero());
    let num = e2pi(frac_mul(theta, count)) - one;
    let den = e2pi(theta) - one;
    first * num / den
}

/// Assemble the full report with default options.
pub fn proposition_report<T: Real>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    x: u64,
    y: u64,
) -> Result<DecompositionReport<T>> {
    proposition_report_with(table, f, x, y, &ReportOptions::default())
}

/// Assemble the full report: the three exact terms, the Type I maximum
/// with its Möbius majorant, the grid-restricted Type II maximum, and the
/// assembled bound. Fails with [`Error::ToleranceExceeded`] when the
/// three-term identity does not close to tolerance.
pub fn proposition_report_with<T: Real>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    x: u64,
    y: u64,
    opts: &ReportOptions<T>,
) -> Result<DecompositionReport<T>> {
    check_xy(table, x, y)?;
    let true_sum = true_rough_prime_sum(table, f, x, y)?;
    let log_term = rough_log_sum(table, f, x, y)?;
    let bilinear_term = bilinear_sum(table, f, x, y)?;
    let identity_residual = (true_sum - (log_term - bilinear_term)).norm();
    let allowed = opts.identity_rel_tol * (T::one() + log_term.norm());
    if identity_residual > allowed {
        return Err(Error::ToleranceExceeded {
            what: "decomposition identity residual",
            value: identity_residual.as_f64(),
            tolerance: allowed.as_f64(),
        });
    }
    let (s1_value, s1_argmax_t) = type_i(table, f, x, y)?;
    let (_, s1_divisor_form) = type_i_moebius_expansion(table, f, s1_argmax_t, y)?;
    let cfg = TypeIiConfig::new(x, y);
    let s2 = type_ii(table, f, x, y, &cfg)?;
    let ln_x = T::ln_u64(x);
    let two = T::of_u64(2);
    let bound_value = two * s1_value * ln_x + (s2.value * T::of_u64(x) * ln_x.powi(5)).sqrt();
    let ratio = if bound_value > T::zero() {
        true_sum.norm() / bound_value
    } else {
        T::zero()
    };
    Ok(DecompositionReport {
        x,
        y,
        true_sum,
        log_term,
        bilinear_term,
        identity_residual,
        s1_value,
        s1_argmax_t,
        s1_divisor_form,
        s2_value: s2.value,
        s2_arg_l: s2.arg_l,
        s2_arg_m: s2.arg_m,
        s2_vacuous: s2.vacuous,
        bound_value,
        ratio,
    })
}

/// Numeric checks for every step used to bound the decomposition:
///
/// 1. the log term equals its piecewise-exact integral form
///    `∫_1^x (Σ_{t≤n≤x, rough} F(n)) dt/t` (integrand constant between
///    consecutive integers);
/// 2. `|log_term| ≤ 2·log x·S_I`;
/// 3. per dyadic block `(L, M)`, the Cauchy–Schwarz inequality
///    `|Σ_ℓ Λ(ℓ) T_ℓ|² ≤ (Σ_ℓ Λ(ℓ)²)(Σ_ℓ |T_ℓ|²)` with
///    `T_ℓ = Σ_{m∈(M,2M], m≤x/ℓ, rough} F(ℓm)`, both sides direct;
/// 4. the dyadic blocks re-sum to the bilinear term.
///
/// Equality checks are encoded with `rhs = 0` and `lhs` the absolute
/// difference, so every entry must satisfy `slack ≥ −tolerance`.
pub fn proof_step_checks<T: Real>(
    table: &SieveTable<T>,
    f: &TestFunction<T>,
    x: u64,
    y: u64,
) -> Result<Vec<ProofStepCheck<T>>> {
    check_xy(table, x, y)?;
    let mut checks = Vec::new();

    // Step 1: piecewise-exact integral of the suffix sums against log n.
    let log_term = rough_log_sum(table, f, x, y)?;
    let zero_c = Complex::new(T::zero(), T::zero());
    let mut suffix = vec![zero_c; x as usize + 2];
    let mut acc = KahanComplex::new();
    for n in (1..=x).rev() {
        if table.is_rough(n, y)? {
            acc.add(f.eval(n));
        }
        suffix[n as usize] = acc.value();
    }
    let mut integral = KahanComplex::new();
    for k in 1..x {
        let weight = (T::one() / T::of_u64(k)).ln_1p(); // log((k+1)/k)
        integral.add(suffix[k as usize + 1].scale(weight));
    }
    let diff = (integral.value() - log_term).norm();
    checks.push(ProofStepCheck {
        name: "log_term_piecewise_integral".to_string(),
        lhs: diff,
        rhs: T::zero(),
        slack: -diff,
    });

    // Step 2: |log term| ≤ 2 log x · S_I.
    let (s1, _) = type_i(table, f, x, y)?;
    let rhs = T::of_u64(2) * T::ln_u64(x) * s1;
    checks.push(ProofStepCheck {
        name: "log_term_type_i_bound".to_string(),
        lhs: log_term.norm(),
        rhs,
        slack: rhs - log_term.norm(),
    });

    // Step 3: Cauchy–Schwarz per dyadic block, plus the cover re-sum.
    let grid = TypeIiConfig::default_grid(x, y);
    let ells_all = rough_prime_powers(table, x / (y + 1), y)?;
    let rough_m = table.rough_up_to(x / (y + 1), y)?;
    let bilinear_term = bilinear_sum(table, f, x, y)?;
    let mut cover = KahanComplex::new();
    for &lb in &grid {
        let ells: Vec<&PrimePower> = ells_all
            .iter()
            .filter(|pp| pp.value > lb && pp.value <= 2 * lb)
            .collect();
        if ells.is_empty() {
            continue;
        }
        for &mb in &grid {
            let mut block = KahanComplex::new();
            let mut lambda_sq = Kahan::new();
            let mut t_sq = Kahan::new();
            let mut touched = false;
            for pp in &ells {
                let ell = pp.value;
                let m_cap = (2 * mb).min(x / ell);
                if m_cap <= mb {
                    continue;
                }
                let lo = rough_m.partition_point(|&m| m <= mb);
                let hi = rough_m.partition_point(|&m| m <= m_cap);
                let mut t_ell = KahanComplex::new();
                for &m in &rough_m[lo..hi] {
                    if m > y {
                        t_ell.add(f.eval(ell * m));
                        touched = true;
                    }
                }
                let lam = table.prime_log(pp.prime_index);
                block.add(t_ell.value().scale(lam));
                lambda_sq.add(lam * lam);
                t_sq.add(t_ell.value().norm_sqr());
            }
            if !touched {
                continue;
            }
            cover.add(block.value());
            let lhs = block.value().norm_sqr();
            let rhs = lambda_sq.value() * t_sq.value();
            checks.push(ProofStepCheck {
                name: format!("cauchy_schwarz_L{lb}_M{mb}"),
                lhs,
                rhs,
                slack: rhs - lhs,
            });
        }
    }
    let cover_diff = (cover.value() - bilinear_term).norm();
    checks.push(ProofStepCheck {
        name: "dyadic_cover_bilinear".to_string(),
        lhs: cover_diff,
        rhs: T::zero(),
        slack: -cover_diff,
    });

    Ok(checks)
}
