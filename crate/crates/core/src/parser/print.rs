//! Canonical text form of expressions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

use crate::coeff::CoeffPoly;
use crate::expr::{ExpFactor, Expression, Term};
use crate::index::{free_name, Delta, Index, Jet, Label};
use crate::scalar::Scalar;

/// Deterministic text in the input grammar. Dummy labels take the first
/// names not used by any free label of the expression.
pub fn print<T: Scalar>(e: &Expression<T>) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut free: BTreeSet<u8> = BTreeSet::new();
    for (t, _) in e.terms() {
        for i in t.free_indices() {
            if let Some(Label::Free(id)) = i.label() {
                free.insert(id);
            }
        }
    }
    let dummy_names: Vec<String> = (0..=u8::MAX).filter(|id| !free.contains(id)).map(free_name).collect();
    let name = |l: Label| match l {
        Label::Free(id) => free_name(id),
        Label::Dummy(k) => dummy_names[k as usize].clone(),
    };
    let single = e.len() == 1;

    let mut out = String::new();
    for (k, (t, c)) in e.terms().enumerate() {
        let body = term_body(t, &name);
        let text = with_coefficient(c, body, single);
        if k == 0 {
            out.push_str(&text);
        } else if let Some(rest) = text.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&text);
        }
    }
    out
}

fn term_body(t: &Term, name: &impl Fn(Label) -> String) -> Vec<String> {
    let mut parts = Vec::new();
    if !t.exp().is_identity() {
        parts.push(format!("exp({}*f)", exponent_text(t.exp())));
    }
    for Delta { hol, anti } in t.deltas() {
        parts.push(format!("delta({},{}')", name(*hol), name(*anti)));
    }
    for j in t.factors() {
        parts.push(jet_text(j, name));
    }
    parts
}

fn jet_text(j: &Jet, name: &impl Fn(Label) -> String) -> String {
    let slots: Vec<String> = j
        .indices()
        .iter()
        .map(|i| match i {
            Index::Hol(l) => name(*l),
            Index::Anti(l) => format!("{}'", name(*l)),
            Index::T => "0".to_string(),
        })
        .collect();
    format!("f[{}]", slots.join(","))
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Exponent of a weight, parenthesized unless it is a single factor.
pub fn exponent_text(k: ExpFactor) -> String {
    let poly: CoeffPoly<BigRational> = CoeffPoly::affine(&big(k.c), &big(k.n), &big(k.p));
    let s = poly.to_string();
    if poly.len() == 1 && !s.contains('/') && !s.starts_with('-') {
        s
    } else {
        format!("({s})")
    }
}

fn with_coefficient<T: Scalar>(c: &CoeffPoly<T>, body: Vec<String>, single: bool) -> String {
    let joined = body.join("*");
    let is_one = c.as_constant().is_some_and(|g| g.im.is_zero() && g.re.is_one());
    let is_minus_one = c.as_constant().is_some_and(|g| g.im.is_zero() && (g.re.clone() + T::one()).is_zero());
    if body.is_empty() {
        let s = c.to_string();
        return if c.len() > 1 && !single { format!("({s})") } else { s };
    }
    if is_one {
        return joined;
    }
    if is_minus_one {
        return format!("-{joined}");
    }
    let s = c.to_string();
    if c.len() > 1 {
        format!("({s})*{joined}")
    } else {
        format!("{s}*{joined}")
    }
}
