use std::time::Instant;

use crjet_core::identities::builtin_cases;
use crjet_core::oracle::oracle_check;

#[test]
fn every_case_vanishes_at_random_jet_points() {
    let points: usize = std::env::var("ORACLE_POINTS").ok().and_then(|s| s.parse().ok()).unwrap_or(5);
    let mut bad = Vec::new();
    for case in builtin_cases() {
        let start = Instant::now();
        let s = oracle_check(&case, &[1, 2], points, 7, &[], true).unwrap_or_else(|e| panic!("{}: {e}", case.id));
        println!("{:<22} nonzero={:<3} {:>6}ms", case.id, s.nonzero, start.elapsed().as_millis());
        if !s.agrees {
            bad.push(case.id.clone());
        }
    }
    assert!(bad.is_empty(), "oracle disagrees on {bad:?}");
}
