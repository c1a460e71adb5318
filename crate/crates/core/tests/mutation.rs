//! A sign flip in one summand of one tensor builder must break some cases,
//! only cases that use the tensor, and the oracle must agree on each verdict.

mod common;

use crjet_core::identities::{compile_catalog, run_catalog, VerifyOptions};
use crjet_core::oracle::oracle_check;
use crjet_core::parser::{Catalog, ParseOptions};
use crjet_core::{Definitions, TensorName};

use common::deps::dependencies;

#[test]
fn each_sign_flip_breaks_only_dependent_cases() {
    let cat = Catalog::builtin();
    let mut summary = Vec::new();
    for name in TensorName::ALL {
        for k in 0..name.summands() {
            let opts = ParseOptions { defs: Definitions::with_flip(name, k), ..ParseOptions::default() };
            let cases = compile_catalog(&cat, &opts).unwrap();
            let reports = run_catalog(&cases, &VerifyOptions::default());
            let mut failing = Vec::new();
            for r in &reports {
                let case = cases.iter().find(|c| c.id == r.id).unwrap();
                assert!(r.error.is_none(), "{name}/{k} {}: {:?}", r.id, r.error);
                let src = cat.cases.iter().find(|c| c.id == case.id).unwrap();
                let deps = dependencies(&cat, &src.body);
                if !r.passed {
                    assert!(deps.contains(&name), "{name}/{k} breaks {} which does not use it", r.id);
                    failing.push(r.id.clone());
                }
                if deps.contains(&name) {
                    let o = oracle_check(case, &[2], 2, 3, &[], r.passed).unwrap();
                    assert!(o.agrees, "{name}/{k} {}: symbolic {} oracle nonzero {}", r.id, r.passed, o.nonzero);
                }
            }
            assert!(!failing.is_empty(), "flipping {name}/{k} breaks nothing");
            summary.push(format!("{name}/{k}: {} cases fail", failing.len()));
        }
    }
    println!("{}", summary.join("\n"));
}
