//! The reduction contract: every report-feeding quantity is bit-identical
//! across worker counts.

use roughsum_core::bv::{self, BvParameters, Weight};
use roughsum_core::decomposition::{self, TypeIiConfig};
use roughsum_core::func::TestFunction;
use roughsum_core::identities;
use roughsum_core::sieve::SieveTable;

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn decomposition_terms_are_threadcount_independent() {
    let t = SieveTable::<f64>::build(5000).unwrap();
    let f = TestFunction::phase(0.414_213_562_373_095);
    let (x, y) = (5000u64, 7u64);
    let run = || {
        let a = decomposition::true_rough_prime_sum(&t, &f, x, y).unwrap();
        let b = decomposition::rough_log_sum(&t, &f, x, y).unwrap();
        let c = decomposition::bilinear_sum(&t, &f, x, y).unwrap();
        let s2 = decomposition::type_ii(&t, &f, x, y, &TypeIiConfig::new(x, y)).unwrap();
        (
            a.re.to_bits(),
            a.im.to_bits(),
            b.re.to_bits(),
            b.im.to_bits(),
            c.re.to_bits(),
            c.im.to_bits(),
            s2.value.to_bits(),
            s2.arg_l,
            s2.arg_m,
        )
    };
    let r1 = in_pool(1, run);
    let r4 = in_pool(4, run);
    let r8 = in_pool(8, run);
    assert_eq!(r1, r4);
    assert_eq!(r1, r8);
}

#[test]
fn scans_and_profiles_are_threadcount_independent() {
    let t = SieveTable::<f64>::build(20_000).unwrap();
    let params = BvParameters::with_overrides(20_000, 1.0f64, Some(40), None, Weight::Psi).unwrap();
    let run = || {
        let scan = identities::scan_trivial_identity(&t, 20_000).unwrap();
        let recs = bv::discrepancy_profile(&t, &params).unwrap();
        let bits: Vec<(u64, u64, u64)> = recs
            .iter()
            .map(|r| (r.q, r.a_worst, r.discrepancy.to_bits()))
            .collect();
        (scan.max_abs_residual.to_bits(), scan.argmax_n, bits)
    };
    let r1 = in_pool(1, run);
    let r8 = in_pool(8, run);
    assert_eq!(r1, r8);
}
