//! The numeric core is generic over the scalar; exercise the `f32`
//! instantiation end to end at a small scale.

use roughsum_core::bv;
use roughsum_core::decomposition;
use roughsum_core::func::TestFunction;
use roughsum_core::sieve::SieveTable;

#[test]
fn f32_instantiation_works_at_small_scale() {
    let table = SieveTable::<f32>::build(500).unwrap();
    assert!((table.von_mangoldt(8).unwrap() - 2f32.ln()).abs() < 1e-6);

    let f = TestFunction::<f32>::phase(0.41421356);
    let true_sum = decomposition::true_rough_prime_sum(&table, &f, 500, 5).unwrap();
    let log_term = decomposition::rough_log_sum(&table, &f, 500, 5).unwrap();
    let bil = decomposition::bilinear_sum(&table, &f, 500, 5).unwrap();
    let resid = (true_sum - (log_term - bil)).norm();
    // f32 headroom: ~7 significant digits over a few hundred terms.
    assert!(resid <= 1e-3 * (1.0 + log_term.norm()), "resid={resid}");

    let (s1, t1) = decomposition::type_i(&table, &f, 500, 5).unwrap();
    assert!(s1 >= 0.0 && t1 >= 1);

    let psi = bv::psi_progression(&table, 500, 4, 1).unwrap();
    let abe = bv::abe_split(&table, 500, 4, 1, 5).unwrap();
    assert!((psi - abe.combined()).abs() < 1e-2);
}

#[test]
fn f64_aliases_are_usable() {
    let table: roughsum_core::SieveTable64 = SieveTable::build(100).unwrap();
    let f: roughsum_core::TestFunction64 = TestFunction::one();
    let r: roughsum_core::DecompositionReport64 =
        decomposition::proposition_report(&table, &f, 100, 3).unwrap();
    assert!(r.identity_residual <= 1e-9);
}
