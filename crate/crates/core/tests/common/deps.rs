//! Which tensors a catalog case depends on, by scanning its source text.

use std::collections::BTreeSet;

use crjet_core::parser::Catalog;
use crjet_core::TensorName;

/// Tensors named in `text`, by identifier and argument count.
pub fn mentioned(text: &str) -> BTreeSet<TensorName> {
    let mut out = BTreeSet::new();
    let b = text.as_bytes();
    let mut k = 0;
    while k < b.len() {
        if b[k].is_ascii_alphanumeric() || b[k] == b'_' || b[k] == b'$' {
            let start = k;
            while k < b.len() && (b[k].is_ascii_alphanumeric() || b[k] == b'_' || b[k] == b'$') {
                k += 1;
            }
            let word = &text[start..k];
            let args = (k < b.len() && b[k] == b'[').then(|| text[k..].split(']').next().unwrap().matches(',').count() + 1);
            match (word, args) {
                ("D", Some(2)) => out.insert(TensorName::D2),
                ("D", Some(1)) => out.insert(TensorName::D1),
                ("E", Some(2)) => out.insert(TensorName::E2),
                ("E", Some(1)) => out.insert(TensorName::E1),
                ("G", Some(1)) => out.insert(TensorName::G1),
                ("g", None) => out.insert(TensorName::G),
                ("df2", None) => out.insert(TensorName::DfNorm2),
                _ => false,
            };
        } else {
            k += 1;
        }
    }
    out
}

/// Tensors a case depends on, through definitions and inside builders.
pub fn dependencies(cat: &Catalog, body: &str) -> BTreeSet<TensorName> {
    let mut text = body.to_string();
    // definitions only reference earlier ones, so one reverse pass suffices
    for d in cat.defs.iter().rev() {
        if text.contains(&format!("${}", d.name)) {
            text.push('\n');
            text.push_str(&d.body);
        }
    }
    let mut deps = mentioned(&text);
    if deps.contains(&TensorName::D1) {
        deps.insert(TensorName::DfNorm2);
    }
    if [TensorName::E2, TensorName::E1, TensorName::G1].iter().any(|t| deps.contains(t)) {
        deps.insert(TensorName::G);
    }
    deps
}
