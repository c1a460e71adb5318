//! Abstract-index jet expressions.
//!
//! An [`Expression`] is a finite sum of monomials `c · e^{kf} · Π f_w · Π δ`,
//! with `c ∈ ℚ(i)[n,p,s]`. Monomials are kept in canonical form: contracted
//! labels renamed to the minimal dummy assignment, deltas eliminated unless
//! both slots are free, factors sorted.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeff::{CoeffPoly, Var};
use crate::gaussian::Gaussian;
use crate::index::{index_name, Delta, Index, Jet, Label, Word};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("free index mismatch: {{{left}}} vs {{{right}}}")]
    SignatureMismatch { left: String, right: String },
    #[error("index {0} occurs twice with the same kind in one monomial")]
    DuplicateIndex(String),
    #[error("real part needs a scalar expression, found free indices {{{0}}}")]
    NonScalar(String),
    #[error("intermediate expression exceeded {limit} monomials")]
    TermCap { limit: usize },
    #[error("divergence needs exactly one free holomorphic index, found {{{0}}}")]
    BadDivergence(String),
    #[error("no tensor {0}")]
    Arity(String),
}

pub type Result<T> = std::result::Result<T, ExprError>;

/// `e^{(c + n_coef·n + p_coef·p) f}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExpFactor {
    pub c: Rational64,
    pub n: Rational64,
    pub p: Rational64,
}

impl ExpFactor {
    pub fn identity() -> ExpFactor {
        ExpFactor { c: Rational64::zero(), n: Rational64::zero(), p: Rational64::zero() }
    }

    pub fn new(c: Rational64, n: Rational64, p: Rational64) -> ExpFactor {
        ExpFactor { c, n, p }
    }

    pub fn int(c: i64, n: i64, p: i64) -> ExpFactor {
        ExpFactor::new(c.into(), n.into(), p.into())
    }

    pub fn is_identity(&self) -> bool {
        self.c.is_zero() && self.n.is_zero() && self.p.is_zero()
    }

    pub fn combine(self, o: ExpFactor) -> ExpFactor {
        ExpFactor { c: self.c + o.c, n: self.n + o.n, p: self.p + o.p }
    }

    pub fn scale(self, k: Rational64) -> ExpFactor {
        ExpFactor { c: self.c * k, n: self.n * k, p: self.p * k }
    }

    /// The exponent `c + n_coef·n + p_coef·p` as a coefficient polynomial.
    pub fn exponent<T: Scalar>(&self) -> CoeffPoly<T> {
        CoeffPoly::affine(&T::from_ratio64(self.c), &T::from_ratio64(self.n), &T::from_ratio64(self.p))
    }
}

/// One monomial without its coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub(crate) exp: ExpFactor,
    pub(crate) factors: Vec<Jet>,
    pub(crate) deltas: Vec<Delta>,
}

impl Ord for Term {
    fn cmp(&self, o: &Self) -> Ordering {
        self.exp
            .cmp(&o.exp)
            .then(self.factors.len().cmp(&o.factors.len()))
            .then_with(|| self.factors.cmp(&o.factors))
            .then_with(|| self.deltas.cmp(&o.deltas))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Term {
    pub fn unit() -> Term {
        Term { exp: ExpFactor::identity(), factors: Vec::new(), deltas: Vec::new() }
    }

    pub fn exp(&self) -> ExpFactor {
        self.exp
    }

    pub fn factors(&self) -> &[Jet] {
        &self.factors
    }

    pub fn deltas(&self) -> &[Delta] {
        &self.deltas
    }

    pub fn dummy_count(&self) -> u8 {
        self.factors
            .iter()
            .flat_map(|j| j.indices())
            .filter_map(|i| match i {
                Index::Hol(Label::Dummy(k)) => Some(k + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn max_jet_len(&self) -> usize {
        self.factors.iter().map(Jet::len).max().unwrap_or(0)
    }

    /// Free slots, including those carried by deltas.
    pub fn free_indices(&self) -> BTreeSet<Index> {
        let mut out = BTreeSet::new();
        for j in &self.factors {
            for i in j.indices() {
                if let Some(Label::Free(_)) = i.label() {
                    out.insert(*i);
                }
            }
        }
        for d in &self.deltas {
            out.insert(Index::Hol(d.hol));
            out.insert(Index::Anti(d.anti));
        }
        out
    }

    pub(crate) fn raw(&self) -> RawTerm {
        RawTerm {
            exp: self.exp,
            factors: self.factors.iter().map(|j| Word::from_slice(j.indices())).collect(),
            deltas: self.deltas.clone(),
        }
    }

    fn shifted_raw(&self, by: u8) -> RawTerm {
        let mut r = self.raw();
        if by > 0 {
            r.map_labels(|l| match l {
                Label::Dummy(k) => Label::Dummy(k + by),
                l => l,
            });
        }
        r
    }
}

/// A monomial under construction: labels arbitrary, words unsorted, deltas
/// not yet eliminated. A label used once as `Hol` and once as `Anti` denotes
/// a contraction.
#[derive(Clone, Debug)]
pub(crate) struct RawTerm {
    pub exp: ExpFactor,
    pub factors: Vec<Word>,
    pub deltas: Vec<Delta>,
}

impl RawTerm {
    pub fn map_labels(&mut self, f: impl Fn(Label) -> Label) {
        for w in &mut self.factors {
            for i in w.iter_mut() {
                if let Some(l) = i.label() {
                    *i = i.with_label(f(l));
                }
            }
        }
        for d in &mut self.deltas {
            d.hol = f(d.hol);
            d.anti = f(d.anti);
        }
    }

    fn replace_slot(&mut self, from: Index, to: Index) -> bool {
        for w in &mut self.factors {
            if let Some(pos) = w.iter().position(|i| *i == from) {
                w[pos] = to;
                return true;
            }
        }
        false
    }

    /// Removes one delta by contraction. Returns the number of traces taken
    /// (each contributes a factor `n`), or `None` when nothing is contractible.
    fn eliminate_one_delta(&mut self) -> Option<u32> {
        for k in 0..self.deltas.len() {
            let Delta { hol: x, anti: y } = self.deltas[k];
            if x == y {
                self.deltas.remove(k);
                return Some(1);
            }
            if self.replace_slot(Index::Anti(x), Index::Anti(y)) {
                self.deltas.remove(k);
                return Some(0);
            }
            if let Some(j) = (0..self.deltas.len()).find(|&j| j != k && self.deltas[j].anti == x) {
                self.deltas[j].anti = y;
                self.deltas.remove(k);
                return Some(0);
            }
            if self.replace_slot(Index::Hol(y), Index::Hol(x)) {
                self.deltas.remove(k);
                return Some(0);
            }
            if let Some(j) = (0..self.deltas.len()).find(|&j| j != k && self.deltas[j].hol == y) {
                self.deltas[j].hol = x;
                self.deltas.remove(k);
                return Some(0);
            }
        }
        None
    }

    /// Contracts, eliminates deltas and canonicalizes. Returns the term and
    /// the power of `n` produced by delta traces.
    pub fn settle(mut self) -> Result<(Term, u32)> {
        let mut traces = 0;
        while let Some(t) = self.eliminate_one_delta() {
            traces += t;
        }
        let mut counts: BTreeMap<Label, (u8, u8)> = BTreeMap::new();
        let slots = self
            .factors
            .iter()
            .flat_map(|w| w.iter().copied())
            .chain(self.deltas.iter().flat_map(|d| [Index::Hol(d.hol), Index::Anti(d.anti)]));
        for i in slots {
            match i {
                Index::Hol(l) => counts.entry(l).or_default().0 += 1,
                Index::Anti(l) => counts.entry(l).or_default().1 += 1,
                Index::T => {}
            }
        }
        for (l, (h, a)) in &counts {
            if *h > 1 {
                return Err(ExprError::DuplicateIndex(index_name(Index::Hol(*l))));
            }
            if *a > 1 {
                return Err(ExprError::DuplicateIndex(index_name(Index::Anti(*l))));
            }
            assert!(!l.is_dummy() || (*h == 1 && *a == 1), "dangling dummy label {l:?}");
        }
        let contracted: Vec<Label> = counts.iter().filter(|(_, c)| **c == (1, 1)).map(|(l, _)| *l).collect();
        let factors = canonical_factors(&self.factors, &contracted);
        let mut deltas = self.deltas;
        deltas.sort_unstable();
        Ok((Term { exp: self.exp, factors, deltas }, traces))
    }
}

/// Relabels `contracted` onto `Dummy(0..)` minimizing the sorted factor
/// list. Only assignments that order dummies by a relabeling-invariant key
/// are tried; since the key does not depend on the labels, the minimum is
/// still canonical.
fn canonical_factors(factors: &[Word], contracted: &[Label]) -> Vec<Jet> {
    if contracted.is_empty() {
        let mut out: Vec<Jet> = factors.iter().map(|w| Jet::new(w.iter().copied())).collect();
        out.sort_unstable();
        return out;
    }
    let placeholder = Label::Dummy(u8::MAX);
    let skeleton = |w: &Word| -> Jet {
        Jet::new(w.iter().map(|i| match i.label() {
            Some(l) if contracted.contains(&l) => i.with_label(placeholder),
            _ => *i,
        }))
    };
    let skeletons: Vec<Jet> = factors.iter().map(skeleton).collect();
    let mut keyed: Vec<((&Jet, &Jet, bool), Label)> = contracted
        .iter()
        .map(|&l| {
            let hol = factors.iter().position(|w| w.contains(&Index::Hol(l))).expect("contracted label");
            let anti = factors.iter().position(|w| w.contains(&Index::Anti(l))).expect("contracted label");
            ((&skeletons[hol], &skeletons[anti], hol == anti), l)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));

    // classes of equal key; every permutation inside each class is tried
    let mut classes: Vec<Vec<Label>> = Vec::new();
    for (k, (key, l)) in keyed.iter().enumerate() {
        if k > 0 && keyed[k - 1].0 == *key {
            classes.last_mut().unwrap().push(*l);
        } else {
            classes.push(vec![*l]);
        }
    }

    let apply = |order: &[Label]| -> Vec<Jet> {
        let mut out: Vec<Jet> = factors
            .iter()
            .map(|w| {
                Jet::new(w.iter().map(|i| match i.label() {
                    Some(l) => match order.iter().position(|x| *x == l) {
                        Some(k) => i.with_label(Label::Dummy(k as u8)),
                        None => *i,
                    },
                    None => *i,
                }))
            })
            .collect();
        out.sort_unstable();
        out
    };

    let perms: Vec<Vec<Vec<Label>>> = classes.iter().map(|c| permutations(c)).collect();
    let mut odometer = vec![0usize; perms.len()];
    let mut best: Option<Vec<Jet>> = None;
    loop {
        let order: Vec<Label> = odometer.iter().zip(&perms).flat_map(|(k, p)| p[*k].iter().copied()).collect();
        let cand = apply(&order);
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
        let mut pos = 0;
        loop {
            if pos == odometer.len() {
                return best.unwrap();
            }
            odometer[pos] += 1;
            if odometer[pos] < perms[pos].len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

fn permutations<X: Copy>(items: &[X]) -> Vec<Vec<X>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn fmt_signature(s: &BTreeSet<Index>) -> String {
    s.iter().map(|i| index_name(*i)).collect::<Vec<_>>().join(", ")
}

/// A finite sum of canonical monomials with coefficients in `ℚ(i)[n,p,s]`
/// (or its floating analogue). The zero expression has no signature and is
/// compatible with every other.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expression<T: Scalar> {
    terms: BTreeMap<Term, CoeffPoly<T>>,
}

impl<T: Scalar> Default for Expression<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> Expression<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: CoeffPoly<T>) -> Self {
        let mut e = Self::zero();
        e.insert(Term::unit(), c);
        e
    }

    pub fn one() -> Self {
        Self::constant(CoeffPoly::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(CoeffPoly::from_i64(v))
    }

    pub fn real(v: T) -> Self {
        Self::constant(CoeffPoly::real(v))
    }

    pub fn i() -> Self {
        Self::constant(CoeffPoly::i())
    }

    pub fn var(v: Var) -> Self {
        Self::constant(CoeffPoly::var(v))
    }

    pub fn exp(k: ExpFactor) -> Self {
        Self::one().with_raw(RawTerm { exp: k, factors: vec![], deltas: vec![] })
    }

    /// `f_w`. Panics on a repeated slot of the same kind.
    pub fn jet(word: &[Index]) -> Self {
        Self::try_jet(word).expect("invalid jet word")
    }

    pub fn try_jet(word: &[Index]) -> Result<Self> {
        assert!(!word.is_empty(), "underived f only appears inside exp factors");
        Self::from_raw(RawTerm { exp: ExpFactor::identity(), factors: vec![Word::from_slice(word)], deltas: vec![] }, CoeffPoly::one())
    }

    pub fn delta(hol: Label, anti: Label) -> Self {
        Self::from_raw(RawTerm { exp: ExpFactor::identity(), factors: vec![], deltas: vec![Delta { hol, anti }] }, CoeffPoly::one())
            .expect("delta")
    }

    fn with_raw(self, raw: RawTerm) -> Self {
        Self::from_raw(raw, CoeffPoly::one()).expect("valid raw term")
    }

    pub(crate) fn from_raw(raw: RawTerm, c: CoeffPoly<T>) -> Result<Self> {
        let mut e = Self::zero();
        e.insert_raw(raw, c)?;
        Ok(e)
    }

    pub(crate) fn insert_raw(&mut self, raw: RawTerm, c: CoeffPoly<T>) -> Result<()> {
        let (t, traces) = raw.settle()?;
        let c = if traces > 0 { c * CoeffPoly::var(Var::N).pow(traces) } else { c };
        self.insert(t, c);
        Ok(())
    }

    pub(crate) fn insert(&mut self, t: Term, c: CoeffPoly<T>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &CoeffPoly<T>)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Term, CoeffPoly<T>> {
        self.terms
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Term, CoeffPoly<T>)>) -> Self {
        let mut e = Self::zero();
        for (t, c) in terms {
            e.insert(t, c);
        }
        e
    }

    /// Free slots shared by all monomials; `None` for the zero expression.
    pub fn signature(&self) -> Option<BTreeSet<Index>> {
        self.terms.keys().next().map(Term::free_indices)
    }

    pub fn is_scalar(&self) -> bool {
        self.signature().is_none_or(|s| s.is_empty())
    }

    fn check_signature(&self, o: &Self) -> Result<()> {
        match (self.signature(), o.signature()) {
            (Some(a), Some(b)) if a != b => Err(ExprError::SignatureMismatch { left: fmt_signature(&a), right: fmt_signature(&b) }),
            _ => Ok(()),
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_signature(o)?;
        let mut out = self.clone();
        for (t, c) in &o.terms {
            out.insert(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        Self { terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &CoeffPoly<T>) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.insert(t.clone(), c * k);
        }
        out
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&CoeffPoly::from_i64(k))
    }

    /// Product; dummies of `o` are refreshed, and a free label carried with
    /// opposite kinds by the two factors becomes a contraction.
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (ta, ca) in &self.terms {
            let shift = ta.dummy_count();
            for (tb, cb) in &o.terms {
                let mut raw = ta.raw();
                let rb = tb.shifted_raw(shift);
                raw.exp = raw.exp.combine(rb.exp);
                raw.factors.extend(rb.factors);
                raw.deltas.extend(rb.deltas);
                out.insert_raw(raw, ca * cb)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Complex conjugate: swaps slot kinds, conjugates coefficients, fixes
    /// `f`, `f_0` and exponential weights.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            let mut raw = t.raw();
            for w in &mut raw.factors {
                for i in w.iter_mut() {
                    *i = i.conj();
                }
            }
            for d in &mut raw.deltas {
                *d = d.conj();
            }
            out.insert_raw(raw, c.conj()).expect("conjugation preserves validity");
        }
        out
    }

    /// `(a + conj a)/2` for a scalar `a`.
    pub fn re_part(&self) -> Result<Self> {
        if let Some(s) = self.signature() {
            if !s.is_empty() {
                return Err(ExprError::NonScalar(fmt_signature(&s)));
            }
        }
        let half = CoeffPoly::real(T::one() / T::from_i64(2));
        Ok(self.try_add(&self.conj())?.scale(&half))
    }

    /// `Z_idx` (or `∂/∂t` for [`Index::T`]) by the Leibniz rule. An index
    /// whose label matches a free slot of opposite kind contracts with it.
    pub fn z_derivative(&self, idx: Index) -> Result<Self> {
        assert!(!matches!(idx.label(), Some(Label::Dummy(_))), "derivative index must be free");
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            let base = t.raw();
            for k in 0..base.factors.len() {
                let mut raw = base.clone();
                raw.factors[k].push(idx);
                out.insert_raw(raw, c.clone())?;
            }
            if !t.exp.is_identity() {
                let mut raw = base.clone();
                raw.factors.push(Word::from_slice(&[idx]));
                out.insert_raw(raw, c * &t.exp.exponent())?;
            }
        }
        Ok(out)
    }

    /// Derivative along a word, applied left to right.
    pub fn z_derivative_word(&self, word: &[Index]) -> Result<Self> {
        let mut e = self.clone();
        for i in word {
            e = e.z_derivative(*i)?;
        }
        Ok(e)
    }

    pub fn map_coeffs(&self, f: impl Fn(&CoeffPoly<T>) -> CoeffPoly<T>) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.insert(t.clone(), f(c));
        }
        out
    }

    /// Substitutes a value for an indeterminate, also inside exponential
    /// weights when `v` is `n` or `p` and the value is a small rational.
    pub fn specialize(&self, v: Var, value: &T) -> Self {
        let exact = value.to_ratio64();
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            let mut t = t.clone();
            if let Some(x) = exact {
                match v {
                    Var::N => t.exp = ExpFactor::new(t.exp.c + t.exp.n * x, Rational64::zero(), t.exp.p),
                    Var::P => t.exp = ExpFactor::new(t.exp.c + t.exp.p * x, t.exp.n, Rational64::zero()),
                    Var::S => {}
                }
            }
            out.insert(t, c.substitute(v, value));
        }
        out
    }

    /// `den^total · self|_{v = num/den}` coefficientwise.
    pub fn substitute_fraction(&self, v: Var, num: &CoeffPoly<T>, den: &CoeffPoly<T>, total: u16) -> Self {
        self.map_coeffs(|c| c.substitute_fraction(v, num, den, total))
    }

    /// Largest degree of `v` over all coefficients.
    pub fn degree(&self, v: Var) -> u16 {
        self.terms.values().map(|c| c.degree(v)).max().unwrap_or(0)
    }

    /// Renames free labels.
    pub fn rename_free(&self, f: impl Fn(u8) -> u8) -> Result<Self> {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            let mut raw = t.raw();
            raw.map_labels(|l| match l {
                Label::Free(id) => Label::Free(f(id)),
                l => l,
            });
            out.insert_raw(raw, c.clone())?;
        }
        Ok(out)
    }

    /// Multiplies every monomial by an exponential weight.
    pub fn times_exp(&self, k: ExpFactor) -> Self {
        Self::from_terms(self.terms.iter().map(|(t, c)| {
            let mut t = t.clone();
            t.exp = t.exp.combine(k);
            (t, c.clone())
        }))
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Expression<U> {
        Expression::from_terms(self.terms.iter().map(|(t, c)| (t.clone(), c.map_scalar(&f))))
    }

    /// Coefficient of the constant monomial.
    pub fn constant_part(&self) -> CoeffPoly<T> {
        self.terms.get(&Term::unit()).cloned().unwrap_or_default()
    }

    /// Largest number of `Hol`/`Anti`/`T` slots over all monomials.
    pub fn max_jet_len(&self) -> usize {
        self.terms.keys().map(Term::max_jet_len).max().unwrap_or(0)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &CoeffPoly<T>> {
        self.terms.values()
    }
}

impl<T: Scalar> Add for Expression<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.try_add(&o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T: Scalar> Sub for Expression<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.try_sub(&o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T: Scalar> Mul for Expression<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.try_mul(&o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, T: Scalar> Add<&'a Expression<T>> for &'a Expression<T> {
    type Output = Expression<T>;
    fn add(self, o: &Expression<T>) -> Expression<T> {
        self.try_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, T: Scalar> Sub<&'a Expression<T>> for &'a Expression<T> {
    type Output = Expression<T>;
    fn sub(self, o: &Expression<T>) -> Expression<T> {
        self.try_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, T: Scalar> Mul<&'a Expression<T>> for &'a Expression<T> {
    type Output = Expression<T>;
    fn mul(self, o: &Expression<T>) -> Expression<T> {
        self.try_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<T: Scalar> Neg for Expression<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<T: Scalar> Neg for &Expression<T> {
    type Output = Expression<T>;
    fn neg(self) -> Expression<T> {
        self.neg_ref()
    }
}

impl<T: Scalar> fmt::Display for Expression<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print(self))
    }
}

/// Gaussian constant as an expression.
pub fn gaussian<T: Scalar>(c: Gaussian<T>) -> Expression<T> {
    Expression::constant(CoeffPoly::constant(c))
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

    #[test]
    fn relabeled_contractions_merge() {
        let x = E::jet(&[h(0)]) * E::jet(&[a(0)]);
        let y = E::jet(&[h(1)]) * E::jet(&[a(1)]);
        let s = &x + &y;
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms().next().unwrap().1, &CoeffPoly::from_i64(2));
        assert!(s.is_scalar());
    }

    #[test]
    fn relabeling_invariance_with_two_dummies() {
        // f_{a c'} f_c f_{a'} vs f_{b d'} f_d f_{b'}
        let x = E::jet(&[h(0), a(2)]) * E::jet(&[h(2)]) * E::jet(&[a(0)]);
        let y = E::jet(&[h(1), a(3)]) * E::jet(&[h(3)]) * E::jet(&[a(1)]);
        assert_eq!(x, y);
        let z = E::jet(&[h(1)]) * E::jet(&[a(1)]) * E::jet(&[h(3), a(2)]) * E::jet(&[h(2)]);
        // different contraction pattern: f_{b}f_{b'} f_{dc'}f_c has a free d
        assert_ne!(x.signature(), z.signature());
    }

    #[test]
    fn delta_trace_gives_n() {
        let d = E::delta(Label::Free(0), Label::Free(0));
        assert_eq!(d, E::var(Var::N));
        // δ_{a b'} f_{b} = f_a
        let e = E::delta(Label::Free(0), Label::Free(1)) * E::jet(&[h(1)]);
        assert_eq!(e, E::jet(&[h(0)]));
        // δ_{a b'} δ_{b c'} = δ_{a c'}
        let c = E::delta(Label::Free(0), Label::Free(1)) * E::delta(Label::Free(1), Label::Free(2));
        assert_eq!(c, E::delta(Label::Free(0), Label::Free(2)));
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let x = E::jet(&[h(0)]);
        let y = E::jet(&[h(1)]);
        assert!(matches!(x.try_add(&y), Err(ExprError::SignatureMismatch { .. })));
        assert_eq!(x.try_add(&E::zero()).unwrap(), x);
    }

    #[test]
    fn duplicate_index_is_rejected() {
        let x = E::jet(&[h(0)]);
        assert!(matches!(x.try_mul(&x), Err(ExprError::DuplicateIndex(_))));
    }

    #[test]
    fn exp_weights_add() {
        let x = E::exp(ExpFactor::int(2, 0, 1)) * E::exp(ExpFactor::int(-2, 2, 0));
        assert_eq!(x, E::exp(ExpFactor::int(0, 2, 1)));
    }

    #[test]
    fn conj_and_re_part() {
        let f0 = E::jet(&[Index::T]);
        let x = E::i() * f0.clone();
        assert!(x.re_part().unwrap().is_zero());
        let g = E::jet(&[h(0)]) * E::jet(&[a(0)]) + E::exp(ExpFactor::int(2, 0, 1)) - x.clone();
        assert_eq!(g.conj().conj(), g);
        assert_eq!(g.re_part().unwrap(), E::jet(&[h(0)]) * E::jet(&[a(0)]) + E::exp(ExpFactor::int(2, 0, 1)));
        assert!(E::jet(&[h(0)]).re_part().is_err());
    }

    #[test]
    fn z_derivative_of_exponential() {
        let e = E::exp(ExpFactor::int(-2, 2, 0));
        let d = e.z_derivative(a(0)).unwrap();
        let expect = E::jet(&[a(0)]) * e.clone() * (E::var(Var::N) * E::from_i64(2) - E::from_i64(2));
        assert_eq!(d, expect);
    }

    #[test]
    fn derivative_contracts_matching_label() {
        let d = E::jet(&[h(0)]).z_derivative(a(0)).unwrap();
        assert!(d.is_scalar());
        let t = d.terms().next().unwrap().0;
        assert_eq!(t.factors().len(), 1);
        assert_eq!(t.factors()[0].indices(), &[Index::Hol(Label::Dummy(0)), Index::Anti(Label::Dummy(0))]);
    }
}
