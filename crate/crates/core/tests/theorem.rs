use catalan_frobenius::catalan::{verify_gluing_counts, TheoremParams};

#[test]
fn full_window_matches_brute_force() {
    let r = verify_gluing_counts(&TheoremParams::default()).unwrap();
    assert!(r.ok(), "{:#?}", r.mismatches);
    assert!(r.comparisons.len() > 50);
}
