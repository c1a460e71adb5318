//! Rewriting of jet words to sorted form, with optional reduction of
//! Hessian traces through the equation `f_{αᾱ} = −n g`.
//!
//! Rules, valid at any position inside a word:
//!
//! * `f_{u k̄ h v} → f_{u h k̄ v} − 2i δ_{h k̄} f_{u v 0}` (holomorphic slots
//!   move left of antiholomorphic ones);
//! * with the equation enabled, a word `f_{H A 0^k}` containing a contracted
//!   pair `d, d̄` is first rearranged to `f_{d d̄ w}` (collecting commutator
//!   terms) and then replaced by `−n·Z_w g`.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{CoeffPoly, Var};
use crate::expr::{ExpFactor, ExprError, Expression, RawTerm, Result, Term};
use crate::index::{Index, Kind, Label, Word, SCRATCH_BASE};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteConfig {
    /// Reduce contracted Hessian traces with `f_{αᾱ} = −n g`.
    pub use_pde: bool,
    /// Abort when the working set exceeds this many monomials.
    pub max_terms: usize,
    /// Apply rules in a random order seeded by this value (confluence tests).
    pub shuffle_seed: Option<u64>,
}

impl Default for RewriteConfig {
    fn default() -> Self {
        Self { use_pde: true, max_terms: 100_000, shuffle_seed: None }
    }
}

impl RewriteConfig {
    pub fn with_pde(use_pde: bool) -> Self {
        Self { use_pde, ..Self::default() }
    }
}

/// `g = |∂f|² + e^{(2+p)f} − i f_0`.
pub fn g_definition<T: Scalar>() -> Expression<T> {
    let a = Label::Free(0);
    let grad = Expression::jet(&[Index::Hol(a)]) * Expression::jet(&[Index::Anti(a)]);
    grad + Expression::exp(ExpFactor::int(2, 0, 1)) - Expression::i() * Expression::jet(&[Index::T])
}

/// `|∂f|² = f_α f_ᾱ`.
pub fn grad_norm2<T: Scalar>() -> Expression<T> {
    let a = Label::Free(0);
    Expression::jet(&[Index::Hol(a)]) * Expression::jet(&[Index::Anti(a)])
}

/// Normalized `Z_word g`.
pub fn jet_derivative_of_g<T: Scalar>(word: &[Index], cfg: &RewriteConfig) -> Result<Expression<T>> {
    normalize(&g_definition::<T>().z_derivative_word(word)?, cfg)
}

type Rewrite<T> = Vec<(RawTerm, CoeffPoly<T>)>;

/// First out-of-order `(Anti, Hol)` boundary of some factor, or a random one.
fn find_swap(t: &Term, rng: Option<&mut ChaCha8Rng>) -> Option<(usize, usize)> {
    let mut spots = Vec::new();
    for (k, j) in t.factors.iter().enumerate() {
        let w = j.indices();
        for pos in 0..w.len().saturating_sub(1) {
            if w[pos].kind() == Kind::Anti && w[pos + 1].kind() == Kind::Hol {
                if rng.is_none() {
                    return Some((k, pos));
                }
                spots.push((k, pos));
            }
        }
    }
    match rng {
        Some(r) if !spots.is_empty() => Some(spots[r.gen_range(0..spots.len())]),
        _ => None,
    }
}

fn swap_rule<T: Scalar>(t: &Term, c: &CoeffPoly<T>, k: usize, pos: usize) -> Rewrite<T> {
    let base = t.raw();
    let w = &base.factors[k];
    let (x, y) = (w[pos], w[pos + 1]);
    let mut swapped = base.clone();
    swapped.factors[k].swap(pos, pos + 1);

    let mut corr = base.clone();
    let mut cw: Word = w.iter().enumerate().filter(|(q, _)| *q != pos && *q != pos + 1).map(|(_, i)| *i).collect();
    cw.push(Index::T);
    corr.factors[k] = cw;
    corr.deltas.push(crate::index::Delta { hol: y.label().unwrap(), anti: x.label().unwrap() });
    let two_i = CoeffPoly::i() * CoeffPoly::from_i64(-2);
    vec![(swapped, c.clone()), (corr, c * &two_i)]
}

fn pde_rule<T: Scalar>(t: &Term, c: &CoeffPoly<T>, k: usize, d: Label) -> Result<Rewrite<T>> {
    let base = t.raw();
    let w = &base.factors[k];
    let hol: Vec<Index> = w.iter().copied().filter(|i| i.kind() == Kind::Hol && *i != Index::Hol(d)).collect();
    let anti: Vec<Index> = w.iter().copied().filter(|i| i.kind() == Kind::Anti && *i != Index::Anti(d)).collect();
    let t_count = w.iter().filter(|i| **i == Index::T).count();
    let mut out = Vec::new();

    // commutators collected while moving d̄ next to d
    let two_i = CoeffPoly::i() * CoeffPoly::from_i64(2);
    for (j, hj) in hol.iter().enumerate() {
        let mut raw = base.clone();
        let mut cw: Word = Word::new();
        cw.push(Index::Hol(d));
        cw.extend(hol.iter().enumerate().filter(|(q, _)| *q != j).map(|(_, i)| *i));
        cw.extend(anti.iter().copied());
        cw.extend(std::iter::repeat_n(Index::T, t_count + 1));
        raw.factors[k] = cw;
        raw.deltas.push(crate::index::Delta { hol: hj.label().unwrap(), anti: d });
        out.push((raw, c * &two_i));
    }

    // f_{d d̄ w} = −n Z_w g; other dummies become scratch labels so that the
    // product below re-forms their contractions
    let mut rest = base.clone();
    rest.factors.remove(k);
    let scratch = |l: Label| match l {
        Label::Dummy(m) if l != d => Label::Free(SCRATCH_BASE + m),
        l => l,
    };
    rest.map_labels(scratch);
    let word: Vec<Index> = hol
        .iter()
        .chain(anti.iter())
        .map(|i| i.with_label(scratch(i.label().unwrap())))
        .chain(std::iter::repeat_n(Index::T, t_count))
        .collect();
    let rest_expr = Expression::from_raw(rest, c.clone())?;
    let gw = g_definition::<T>().z_derivative_word(&word)?;
    let prod = rest_expr.try_mul(&gw)?.scale(&-CoeffPoly::var(Var::N));
    for (t, c) in prod.terms() {
        out.push((t.raw(), c.clone()));
    }
    Ok(out)
}

/// Rewrites every word to sorted form and, when `cfg.use_pde`, removes all
/// contracted pairs inside single words. The result is canonical: two inputs
/// denoting the same function of the jets normalize to identical values.
pub fn normalize<T: Scalar>(e: &Expression<T>, cfg: &RewriteConfig) -> Result<Expression<T>> {
    let mut rng = cfg.shuffle_seed.map(ChaCha8Rng::seed_from_u64);
    let mut pending: BTreeMap<(Reverse<usize>, Term), CoeffPoly<T>> = BTreeMap::new();
    let mut done: Vec<(Term, CoeffPoly<T>)> = Vec::new();

    fn push<T: Scalar>(pending: &mut BTreeMap<(Reverse<usize>, Term), CoeffPoly<T>>, t: Term, c: CoeffPoly<T>) {
        let key = (Reverse(t.max_jet_len()), t);
        match pending.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    for (t, c) in e.terms() {
        push(&mut pending, t.clone(), c.clone());
    }

    loop {
        let key = match rng.as_mut() {
            Some(r) if !pending.is_empty() => {
                let k = r.gen_range(0..pending.len());
                pending.keys().nth(k).cloned()
            }
            _ => pending.keys().next().cloned(),
        };
        let Some(key) = key else { break };
        let c = pending.remove(&key).unwrap();
        let t = key.1;

        let rewrite = if let Some((k, pos)) = find_swap(&t, rng.as_mut()) {
            Some(swap_rule(&t, &c, k, pos))
        } else if cfg.use_pde {
            let traced = t.factors.iter().enumerate().find_map(|(k, j)| j.self_trace().map(|d| (k, d)));
            match traced {
                Some((k, d)) => Some(pde_rule(&t, &c, k, d)?),
                None => None,
            }
        } else {
            None
        };

        match rewrite {
            None => done.push((t, c)),
            Some(list) => {
                for (raw, c) in list {
                    let (t, traces) = raw.settle()?;
                    let c = if traces > 0 { c * CoeffPoly::var(Var::N).pow(traces) } else { c };
                    push(&mut pending, t, c);
                }
            }
        }
        if pending.len() + done.len() > cfg.max_terms {
            return Err(ExprError::TermCap { limit: cfg.max_terms });
        }
    }
    Ok(Expression::from_terms(done))
}

/// True when every word is sorted and, under `use_pde`, trace-free.
pub fn is_normal<T: Scalar>(e: &Expression<T>, use_pde: bool) -> bool {
    e.terms().all(|(t, _)| t.factors().iter().all(|j| j.is_sorted() && (!use_pde || j.self_trace().is_none())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type E = Expression<BigRational>;

    fn h(i: u8) -> Index {
        Index::free_hol(i)
    }
    fn a(i: u8) -> Index {
        Index::free_anti(i)
    }

    fn norm(e: &E, pde: bool) -> E {
        normalize(e, &RewriteConfig::with_pde(pde)).unwrap()
    }

    #[test]
    fn anti_hol_trace_without_equation() {
        // f_{ᾱα} = f_{αᾱ} − 2n i f_0
        let x = E::jet(&[a(0), h(0)]);
        let expect = E::jet(&[h(0), a(0)]) - E::var(Var::N) * E::from_i64(2) * E::i() * E::jet(&[Index::T]);
        assert_eq!(norm(&x, false), expect);
    }

    #[test]
    fn hessian_trace_with_equation() {
        let x = E::jet(&[h(0), a(0)]);
        let expect = -(E::var(Var::N) * g_definition());
        assert_eq!(norm(&x, true), expect);
    }

    #[test]
    fn commutator_with_free_indices() {
        // f_{a c' b} = f_{a b c'} − 2i δ_{b c'} f_{a 0}
        let x = E::jet(&[h(0), a(2), h(1)]);
        let expect =
            E::jet(&[h(0), h(1), a(2)]) - E::from_i64(2) * E::i() * E::delta(Label::Free(1), Label::Free(2)) * E::jet(&[h(0), Index::T]);
        assert_eq!(norm(&x, false), expect);
    }

    #[test]
    fn equation_real_part() {
        // Re f_{αᾱ} + n|∂f|² + n e^{(2+p)f} = 0
        let x = E::jet(&[h(0), a(0)]).re_part().unwrap() + E::var(Var::N) * (grad_norm2() + E::exp(ExpFactor::int(2, 0, 1)));
        assert!(norm(&x, true).is_zero());
    }

    #[test]
    fn normal_forms_are_fixed_points() {
        let x = E::jet(&[a(0), h(1), a(1), h(0), Index::T]) * E::jet(&[h(2)]);
        let once = norm(&x, true);
        assert!(is_normal(&once, true));
        assert_eq!(norm(&once, true), once);
    }

    #[test]
    fn g_derivative_word_empty_is_g() {
        let g: E = jet_derivative_of_g(&[], &RewriteConfig::default()).unwrap();
        assert_eq!(g, g_definition());
    }
}
