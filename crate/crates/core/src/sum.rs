//! Compensated summation and deterministic parallel reductions.
//!
//! Every sum that ends up in a report goes through Neumaier-compensated
//! accumulators, and parallel sums are chunked at a fixed width with the
//! partial results combined in index order. The chunk width never depends
//! on the worker count, so results are bit-identical across thread pools.

use num_complex::Complex;
use rayon::prelude::*;

use crate::real::Real;

/// Fixed chunk width for parallel reductions. Constant by contract: the
/// reduction tree must not depend on how many workers are available.
pub const DET_CHUNK: usize = 1 << 13;

/// Neumaier-compensated scalar accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan<T: Real> {
    sum: T,
    comp: T,
}

impl<T: Real> Kahan<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Componentwise compensated accumulator for complex terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanComplex<T: Real> {
    re: Kahan<T>,
    im: Kahan<T>,
}

impl<T: Real> KahanComplex<T> {
    pub fn new() -> Self {
        Self {
            re: Kahan::new(),
            im: Kahan::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of `f` over a slice, in slice order.
pub fn sum_complex_seq<T, I, F>(items: &[I], mut f: F) -> Complex<T>
where
    T: Real,
    F: FnMut(&I) -> Complex<T>,
{
    let mut acc = KahanComplex::new();
    for it in items {
        acc.add(f(it));
    }
    acc.value()
}

/// Deterministic parallel compensated sum of `f` over a slice.
///
/// The slice is cut into [`DET_CHUNK`]-sized pieces, each piece is summed
/// sequentially in slice order, and the per-piece results are folded in
/// piece order. Identical output for any worker count, including one.
pub fn sum_complex_par<T, I, F>(items: &[I], f: F) -> Complex<T>
where
    T: Real,
    I: Sync,
    F: Fn(&I) -> Complex<T> + Sync,
{
    let partials: Vec<Complex<T>> = items
        .par_chunks(DET_CHUNK)
        .map(|chunk| {
            let mut acc = KahanComplex::new();
            for it in chunk {
                acc.add(f(it));
            }
            acc.value()
        })
        .collect();
    let mut acc = KahanComplex::new();
    for v in partials {
        acc.add(v);
    }
    acc.value()
}

/// Deterministic parallel compensated sum of `f(n)` over `lo..=hi`.
pub fn sum_complex_range<T, F>(lo: u64, hi: u64, f: F) -> Complex<T>
where
    T: Real,
    F: Fn(u64) -> Complex<T> + Sync,
{
    if hi < lo {
        return Complex::new(T::zero(), T::zero());
    }
    let chunk = DET_CHUNK as u64;
    let starts: Vec<u64> = (lo..=hi).step_by(DET_CHUNK).collect();
    let partials: Vec<Complex<T>> = starts
        .par_iter()
        .map(|&s| {
            let e = hi.min(s + chunk - 1);
            let mut acc = KahanComplex::new();
            for n in s..=e {
                acc.add(f(n));
            }
            acc.value()
        })
        .collect();
    let mut acc = KahanComplex::new();
    for v in partials {
        acc.add(v);
    }
    acc.value()
}

/// Running maximum with the smallest witness on exact ties.
///
/// `offer` keeps the incumbent unless the candidate is strictly larger, so
/// feeding candidates in ascending witness order yields the smallest
/// maximizing witness.
#[derive(Clone, Copy, Debug)]
pub struct ArgMax<T: Real, W: Copy> {
    pub value: T,
    pub witness: W,
}

impl<T: Real, W: Copy> ArgMax<T, W> {
    pub fn new(value: T, witness: W) -> Self {
        Self { value, witness }
    }

    #[inline]
    pub fn offer(&mut self, value: T, witness: W) {
        if value > self.value {
            self.value = value;
            self.witness = witness;
        }
    }

    #[inline]
    pub fn merge(&mut self, other: Self) {
        self.offer(other.value, other.witness);
    }
}
