//! Bounded complex weights `F(n)` that the decompositions are evaluated
//! against: constants, exponential phases `e(αn)`, Dirichlet characters to
//! prime moduli, and explicit tables.

use std::fmt;

use num_complex::Complex;

use crate::phase::{e2pi, unit_phase};
use crate::real::Real;
use crate::{Error, Result};

/// A complex-valued weight with a known modulus bound.
#[derive(Clone, Debug)]
pub enum TestFunction<T: Real> {
    /// `F(n) = c` for every `n`.
    Constant(Complex<T>),
    /// `F(n) = e(α n) = exp(2πi α n)`.
    Phase { alpha: T },
    /// A Dirichlet character to a prime modulus.
    Character(DirichletCharacter<T>),
    /// Explicit values for `n = 1..=len`; zero beyond the table.
    Table(TableFunction<T>),
}

impl<T: Real> TestFunction<T> {
    pub fn constant(c: Complex<T>) -> Self {
        TestFunction::Constant(c)
    }

    pub fn one() -> Self {
        TestFunction::Constant(Complex::new(T::one(), T::zero()))
    }

    pub fn zero() -> Self {
        TestFunction::Constant(Complex::new(T::zero(), T::zero()))
    }

    /// `e(αn)`; α is reduced mod 1 (the value only depends on α mod 1).
    pub fn phase(alpha: T) -> Self {
        TestFunction::Phase {
            alpha: alpha - alpha.floor(),
        }
    }

    pub fn character(chi: DirichletCharacter<T>) -> Self {
        TestFunction::Character(chi)
    }

    pub fn table(values: Vec<Complex<T>>) -> Self {
        TestFunction::Table(TableFunction::new(values))
    }

    /// Evaluate `F(n)`. Total for all `n ≥ 1`.
    #[inline]
    pub fn eval(&self, n: u64) -> Complex<T> {
        match self {
            TestFunction::Constant(c) => *c,
            TestFunction::Phase { alpha } => unit_phase(*alpha, n),
            TestFunction::Character(chi) => chi.eval(n),
            TestFunction::Table(t) => t.eval(n),
        }
    }

    /// A bound `B_F` with `|F(n)| ≤ B_F` for all `n`.
    pub fn modulus_bound(&self) -> T {
        match self {
            TestFunction::Constant(c) => c.norm(),
            TestFunction::Phase { .. } => T::one(),
            TestFunction::Character(_) => T::one(),
            TestFunction::Table(t) => t.bound,
        }
    }
}

impl<T: Real> fmt::Display for TestFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Constant(c) => {
                if c.im.is_zero() {
                    write!(f, "const={}", c.re)
                } else {
                    write!(f, "const={}+{}i", c.re, c.im)
                }
            }
            TestFunction::Phase { alpha } => write!(f, "expo={alpha}"),
            TestFunction::Character(chi) => write!(f, "char={},{}", chi.modulus, chi.index),
            TestFunction::Table(t) => write!(f, "table[len={}]", t.values.len()),
        }
    }
}

/// Explicit table of values for `n = 1..=len`.
#[derive(Clone, Debug)]
pub struct TableFunction<T: Real> {
    values: Vec<Complex<T>>,
    bound: T,
}

impl<T: Real> TableFunction<T> {
    pub fn new(values: Vec<Complex<T>>) -> Self {
        let bound = values
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b));
        Self { values, bound }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    fn eval(&self, n: u64) -> Complex<T> {
        if n >= 1 && (n as usize) <= self.values.len() {
            self.values[n as usize - 1]
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }
}

/// Dirichlet character χ to a prime modulus `q`, indexed through the
/// smallest primitive root `g`: `χ(g^k) = e(index·k/(q−1))`, `χ(n) = 0`
/// for `q | n`.
///
/// `index = 0` is the principal character.
#[derive(Clone, Debug)]
pub struct DirichletCharacter<T: Real> {
    pub modulus: u64,
    pub index: u64,
    pub generator: u64,
    /// `values[r]` = χ(n) for `n ≡ r (mod q)`.
    values: Vec<Complex<T>>,
}

impl<T: Real> DirichletCharacter<T> {
    /// Build χ for prime `q ≥ 2` and `0 ≤ index < q − 1`.
    pub fn new(q: u64, index: u64) -> Result<Self> {
        if q < 2 || !is_prime_u64(q) {
            return Err(Error::InvalidArgument(format!(
                "character modulus must be prime, got {q}"
            )));
        }
        if q > 1 << 26 {
            return Err(Error::InvalidArgument(format!(
                "character modulus {q} too large for table construction"
            )));
        }
        let order = q - 1;
        if index >= order {
            return Err(Error::InvalidArgument(format!(
                "character index {index} out of range [0, {})",
                order
            )));
        }
        let g = smallest_primitive_root(q);
        // Discrete-log walk g^0, g^1, ... fills all units exactly once.
        let mut values = vec![Complex::new(T::zero(), T::zero()); q as usize];
        let denom = T::of_u64(order);
        let mut r = 1u64;
        for k in 0..order {
            let t = T::of_u64(index * k % order) / denom;
            values[r as usize] = e2pi(t);
            r = r * g % q;
        }
        Ok(Self {
            modulus: q,
            index,
            generator: g,
            values,
        })
    }

    #[inline]
    pub fn eval(&self, n: u64) -> Complex<T> {
        self.values[(n % self.modulus) as usize]
    }
}

fn is_prime_u64(n: u64) -> bool {
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
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut bb = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Smallest primitive root modulo a prime `q`.
fn smallest_primitive_root(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut m = q - 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'cand: for g in 2..q {
        for &r in &factors {
            if pow_mod(g, (q - 1) / r, q) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SEED: u64 = 0x5eed_0002;

    #[test]
    fn constant_and_table_eval() {
        let f = TestFunction::<f64>::constant(Complex::new(2.0, -1.0));
        assert_eq!(f.eval(17), Complex::new(2.0, -1.0));
        assert!((f.modulus_bound() - 5f64.sqrt()).abs() < 1e-15);

        let t = TestFunction::table(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 3.0)]);
        assert_eq!(t.eval(1), Complex::new(1.0, 0.0));
        assert_eq!(t.eval(2), Complex::new(0.0, 3.0));
        assert_eq!(t.eval(3), Complex::new(0.0, 0.0));
        assert_eq!(t.modulus_bound(), 3.0);
    }

    #[test]
    fn phase_is_periodic_in_alpha() {
        let f = TestFunction::<f64>::phase(1.25);
        let g = TestFunction::<f64>::phase(0.25);
        for n in 1..50 {
            assert_eq!(f.eval(n), g.eval(n));
        }
    }

    #[test]
    fn phase_half_alternates() {
        let f = TestFunction::<f64>::phase(0.5);
        for n in 1..100u64 {
            let z = f.eval(n);
            let want = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((z.re - want).abs() < 1e-14 && z.im.abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn character_mod5_matches_hand_table() {
        // Smallest primitive root of 5 is 2: dlog(1,2,4,3) = (0,1,2,3),
        // so χ_1 takes values (1, i, −i, −1) at n ≡ (1, 2, 3, 4).
        let chi = DirichletCharacter::<f64>::new(5, 1).unwrap();
        assert_eq!(chi.generator, 2);
        let close = |z: Complex<f64>, re: f64, im: f64| {
            (z.re - re).abs() < 1e-14 && (z.im - im).abs() < 1e-14
        };
        assert!(close(chi.eval(1), 1.0, 0.0));
        assert!(close(chi.eval(2), 0.0, 1.0));
        assert!(close(chi.eval(3), 0.0, -1.0));
        assert!(close(chi.eval(4), -1.0, 0.0));
        assert_eq!(chi.eval(10), Complex::new(0.0, 0.0));
    }

    #[test]
    fn character_is_completely_multiplicative_on_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for (q, idx) in [(5u64, 1u64), (7, 2), (97, 13), (101, 50)] {
            let chi = DirichletCharacter::<f64>::new(q, idx).unwrap();
            for _ in 0..500 {
                let m = rng.gen_range(1..10_000u64);
                let n = rng.gen_range(1..10_000u64);
                let lhs = chi.eval(m * n);
                let rhs = chi.eval(m) * chi.eval(n);
                assert!((lhs - rhs).norm() < 1e-12, "q={q} idx={idx} m={m} n={n}");
            }
        }
    }

    #[test]
    fn character_zero_off_units_and_principal_is_one() {
        let chi0 = DirichletCharacter::<f64>::new(7, 0).unwrap();
        for n in 1..50u64 {
            if n.gcd(&7) == 1 {
                assert!((chi0.eval(n) - Complex::new(1.0, 0.0)).norm() < 1e-15);
            } else {
                assert_eq!(chi0.eval(n), Complex::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn nonprincipal_character_sums_to_zero_over_period() {
        for idx in 1..4u64 {
            let chi = DirichletCharacter::<f64>::new(5, idx).unwrap();
            let s: Complex<f64> = (1..=5).map(|n| chi.eval(n)).sum();
            assert!(s.norm() < 1e-13, "idx={idx}");
        }
    }

    #[test]
    fn character_rejects_bad_arguments() {
        assert!(DirichletCharacter::<f64>::new(4, 1).is_err());
        assert!(DirichletCharacter::<f64>::new(1, 0).is_err());
        assert!(DirichletCharacter::<f64>::new(5, 4).is_err());
    }

    #[test]
    fn modulus_bound_holds_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
        let fs: Vec<TestFunction<f64>> = vec![
            TestFunction::one(),
            TestFunction::phase(0.414),
            TestFunction::character(DirichletCharacter::new(11, 3).unwrap()),
        ];
        for f in &fs {
            let b = f.modulus_bound();
            for _ in 0..1000 {
                let n = rng.gen_range(1..1_000_000u64);
                assert!(f.eval(n).norm() <= b + 1e-12);
            }
        }
    }
}
