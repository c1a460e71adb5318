use crjet_core::identities::{builtin_cases, run_catalog, VerifyOptions};

#[test]
fn every_catalog_case_verifies() {
    let cases = builtin_cases();
    let reports = run_catalog(&cases, &VerifyOptions::default());
    let mut bad = Vec::new();
    for r in &reports {
        println!(
            "{:<22} {:<5} lhs={:<5} rhs={:<5} residual={:<4} {}ms",
            r.id,
            if r.ok() { "PASS" } else { "FAIL" },
            r.lhs_terms,
            r.rhs_terms,
            r.residual_terms,
            r.wall_ms
        );
        if !r.ok() {
            bad.push(format!("{}: {} {:?}", r.id, r.residual.chars().take(600).collect::<String>(), r.error));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn sum_of_squares_chain() {
    use crjet_core::identities::{verify_sos_chain, SOS_S0_ID, SOS_S1_ID};
    use crjet_core::parser::{Catalog, ParseOptions};
    let reports = verify_sos_chain(&Catalog::builtin(), &ParseOptions::default(), &VerifyOptions::default()).unwrap();
    let ids: Vec<&str> = reports.iter().map(|r| r.id.as_str()).collect();
    assert!(ids.contains(&SOS_S0_ID) && ids.contains(&SOS_S1_ID));
    for r in &reports {
        println!("{:<18} {} {}ms", r.id, r.ok(), r.wall_ms);
        assert!(r.ok(), "{}: {} {:?}", r.id, r.residual.chars().take(400).collect::<String>(), r.error);
    }
}
