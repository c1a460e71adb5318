//! Concrete-dimension evaluation of expressions at exact jet points.
//!
//! A [`JetPoint`] assigns Gaussian-rational values to the canonical jet
//! coordinates of a real `f` on `ℍⁿ` for a fixed `n`. Any other word is
//! reduced to canonical ones with the relations every real solution obeys:
//!
//! - `f_{u k̄ h v} = f_{u h k̄ v} − 2i δ_{hk} f_{u v 0}` (sorting),
//! - `conj f_w = f_{w̄}` (reality),
//! - `f_{11̄w} = −n g_w − Σ_{a≥2} f_{aāw}` (the equation, when enabled).
//!
//! Canonical words are sorted (holomorphic, antiholomorphic, transverse),
//! never contain both `1` and `1̄` when the equation is on, and are the
//! smaller of each conjugate pair.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::Expression;
use crate::gaussian::Gaussian;
use crate::index::{Index, Label};
use crate::scalar::Scalar;
use crate::Rational;

pub type Complex = Gaussian<Rational>;

/// A concrete derivative slot, `Hol(k)`/`Anti(k)` with `1 ≤ k ≤ n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Slot {
    Hol(u8),
    Anti(u8),
    T,
}

impl Slot {
    pub fn conj(self) -> Slot {
        match self {
            Slot::Hol(k) => Slot::Anti(k),
            Slot::Anti(k) => Slot::Hol(k),
            Slot::T => Slot::T,
        }
    }
}

pub type CWord = Vec<Slot>;

pub fn word_name(w: &[Slot]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|s| match s {
            Slot::Hol(k) => k.to_string(),
            Slot::Anti(k) => format!("{k}'"),
            Slot::T => "0".into(),
        })
        .collect();
    format!("f[{}]", parts.join(","))
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum OracleError {
    #[error("jet point has no value for {0}")]
    MissingCoordinate(String),
    #[error("jet point is for n={point_n}, p={point_p}; asked for n={n}, p={p}")]
    Mismatch { point_n: u8, point_p: String, n: u8, p: String },
    #[error("e^({0}·f) is not rational at this point")]
    IrrationalExp(String),
    #[error("free label {0:?} has no value")]
    UnassignedLabel(Label),
    #[error("expression has free indices; use evaluate_components")]
    FreeIndices,
    #[error("reality constraint violated at {0}")]
    Inconsistent(String),
    #[error("n must be between 1 and 9")]
    BadDimension,
}

pub type OracleResult<T> = std::result::Result<T, OracleError>;

#[derive(Clone, Debug)]
enum Source {
    Random(u64),
    Table(HashMap<CWord, Complex>),
}

/// Values of all jets of `f` at one point, for fixed `n`, `p` and `s`.
///
/// `e^f = ρ^M`, so `e^{kf}` is exact whenever `kM` is an integer.
#[derive(Debug)]
pub struct JetPoint {
    pub n: u8,
    pub p: Rational,
    pub s: Rational,
    pub rho: Rational,
    pub exp_den: u32,
    pub pde: bool,
    source: Source,
    memo: RefCell<HashMap<CWord, Complex>>,
}

impl JetPoint {
    /// Seeded pseudo-random coordinates satisfying the equation.
    pub fn random(n: u8, p: Rational, s: Rational, rho: Rational, exp_den: u32, seed: u64) -> OracleResult<JetPoint> {
        Self::build(n, p, s, rho, exp_den, true, Source::Random(seed))
    }

    /// Explicit coordinates, `f = 0`, without the equation. Only canonical
    /// words are looked up; everything else is derived.
    pub fn table(n: u8, values: impl IntoIterator<Item = (CWord, Complex)>) -> OracleResult<JetPoint> {
        let t = values.into_iter().collect();
        Self::build(n, Rational::zero(), Rational::zero(), Rational::one(), 1, false, Source::Table(t))
    }

    fn build(n: u8, p: Rational, s: Rational, rho: Rational, exp_den: u32, pde: bool, source: Source) -> OracleResult<JetPoint> {
        if !(1..=9).contains(&n) {
            return Err(OracleError::BadDimension);
        }
        Ok(JetPoint { n, p, s, rho, exp_den, pde, source, memo: RefCell::new(HashMap::new()) })
    }

    pub fn with_pde(mut self, on: bool) -> Self {
        self.pde = on;
        self.memo.borrow_mut().clear();
        self
    }

    pub fn with_params(mut self, p: Rational, s: Rational) -> Self {
        self.p = p;
        self.s = s;
        self.memo.borrow_mut().clear();
        self
    }

    pub fn with_exp(mut self, rho: Rational, exp_den: u32) -> Self {
        self.rho = rho;
        self.exp_den = exp_den;
        self.memo.borrow_mut().clear();
        self
    }

    /// `e^{k f}`.
    pub fn exp(&self, k: &Rational) -> OracleResult<Rational> {
        let e = k * Rational::from_integer(BigInt::from(self.exp_den));
        self.rho.pow_rational(&e).ok_or_else(|| OracleError::IrrationalExp(k.to_string()))
    }

    fn is_canonical_sorted(w: &[Slot]) -> bool {
        w.windows(2).all(|p| p[0] <= p[1])
    }

    /// Bubble-sorts `w` into canonical order; returns the sorted word and
    /// `f_w − f_sorted`.
    fn sort_with(&self, w: &[Slot]) -> OracleResult<(CWord, Complex)> {
        let mut cur = w.to_vec();
        let mut corr = Complex::zero();
        loop {
            let Some(k) = (0..cur.len().saturating_sub(1)).find(|&k| cur[k] > cur[k + 1]) else {
                return Ok((cur, corr));
            };
            if let (Slot::Anti(a), Slot::Hol(h)) = (cur[k], cur[k + 1]) {
                if a == h {
                    let mut shorter: CWord = cur[..k].to_vec();
                    shorter.extend_from_slice(&cur[k + 2..]);
                    shorter.push(Slot::T);
                    corr -= Complex::new(Rational::zero(), Rational::from_integer(2.into())) * self.value(&shorter)?;
                }
            }
            cur.swap(k, k + 1);
        }
    }

    /// `f_w` for any concrete word.
    pub fn value(&self, w: &[Slot]) -> OracleResult<Complex> {
        if let Some(v) = self.memo.borrow().get(w) {
            return Ok(v.clone());
        }
        let v = self.compute(w)?;
        self.memo.borrow_mut().insert(w.to_vec(), v.clone());
        Ok(v)
    }

    fn compute(&self, w: &[Slot]) -> OracleResult<Complex> {
        if let Some(bad) = w.iter().find(|s| matches!(s, Slot::Hol(k) | Slot::Anti(k) if *k == 0 || *k > self.n)) {
            return Err(OracleError::MissingCoordinate(format!("{} (slot {bad:?} outside 1..{})", word_name(w), self.n)));
        }
        if !Self::is_canonical_sorted(w) {
            let (sorted, corr) = self.sort_with(w)?;
            return Ok(self.value(&sorted)? + corr);
        }
        if self.pde && w.contains(&Slot::Hol(1)) && w.contains(&Slot::Anti(1)) {
            let mut rest = w.to_vec();
            rest.remove(rest.iter().position(|s| *s == Slot::Hol(1)).unwrap());
            rest.remove(rest.iter().position(|s| *s == Slot::Anti(1)).unwrap());
            let mut lead = vec![Slot::Hol(1), Slot::Anti(1)];
            lead.extend_from_slice(&rest);
            // f_lead = f_w + corr
            let (sorted, corr) = self.sort_with(&lead)?;
            debug_assert_eq!(sorted, w);
            return Ok(self.trace_eliminated(&rest)? - corr);
        }
        let c: CWord = w.iter().map(|s| s.conj()).collect();
        let (sigma, corr) = self.sort_with(&c)?;
        match w.cmp(&sigma[..]) {
            std::cmp::Ordering::Less => self.base(w),
            std::cmp::Ordering::Greater => Ok((self.value(&sigma)? + corr).conj()),
            std::cmp::Ordering::Equal => {
                // conj(x) = x + corr forces corr to be imaginary
                if !corr.re.is_zero() {
                    return Err(OracleError::Inconsistent(word_name(w)));
                }
                match &self.source {
                    Source::Random(_) => {
                        let r = self.base(w)?.re;
                        Ok(Complex::new(r, Rational::zero()) - corr.scale(&Rational::new(1.into(), 2.into())))
                    }
                    Source::Table(_) => self.base(w),
                }
            }
        }
    }

    /// `f_{11̄w} = −n Z_w g − Σ_{a≥2} f_{aāw}`.
    fn trace_eliminated(&self, w: &[Slot]) -> OracleResult<Complex> {
        let n = Rational::from_integer(self.n.into());
        let mut acc = -(self.g_derivative(w)?.scale(&n));
        for a in 2..=self.n {
            let mut word = vec![Slot::Hol(a), Slot::Anti(a)];
            word.extend_from_slice(w);
            acc -= self.value(&word)?;
        }
        Ok(acc)
    }

    /// `Z_w g` with `g = Σ f_a f_ā + e^{(2+p)f} − i f_0`.
    pub fn g_derivative(&self, w: &[Slot]) -> OracleResult<Complex> {
        let mut acc = Complex::zero();
        let k = w.len();
        for a in 1..=self.n {
            for mask in 0u32..(1 << k) {
                let (mut x, mut y) = (vec![Slot::Hol(a)], vec![Slot::Anti(a)]);
                for (j, s) in w.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        x.push(*s)
                    } else {
                        y.push(*s)
                    }
                }
                acc += self.value(&x)? * self.value(&y)?;
            }
        }
        let c = Rational::from_integer(2.into()) + self.p.clone();
        let e = self.exp(&c)?;
        acc += self.exp_derivative(&c, w)?.scale(&e);
        let mut t = vec![Slot::T];
        t.extend_from_slice(w);
        Ok(acc - Complex::i() * self.value(&t)?)
    }

    /// `e^{-cf} Z_w e^{cf}`, a polynomial in jets built by the chain rule.
    fn exp_derivative(&self, c: &Rational, w: &[Slot]) -> OracleResult<Complex> {
        let mut poly: Vec<(Rational, Vec<CWord>)> = vec![(Rational::one(), vec![])];
        for s in w {
            let mut next = Vec::new();
            for (coef, words) in &poly {
                let mut grown = words.clone();
                grown.push(vec![*s]);
                next.push((coef * c, grown));
                for j in 0..words.len() {
                    let mut d = words.clone();
                    d[j].push(*s);
                    next.push((coef.clone(), d));
                }
            }
            poly = next;
        }
        let mut acc = Complex::zero();
        for (coef, words) in poly {
            let mut m = Complex::real(coef);
            for w in &words {
                m = m * self.value(w)?;
            }
            acc += m;
        }
        Ok(acc)
    }

    fn base(&self, w: &[Slot]) -> OracleResult<Complex> {
        match &self.source {
            Source::Table(t) => t.get(w).cloned().ok_or_else(|| OracleError::MissingCoordinate(word_name(w))),
            Source::Random(seed) => {
                let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
                for s in w {
                    let b = match s {
                        Slot::Hol(k) => *k,
                        Slot::Anti(k) => 64 + k,
                        Slot::T => 128,
                    };
                    h = (h ^ u64::from(b) ^ 0x100).wrapping_mul(0x0100_0000_01b3);
                }
                let mut rng = ChaCha8Rng::seed_from_u64(h);
                let mut part = || Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into());
                Ok(Complex::new(part(), part()))
            }
        }
    }
}

/// Least `M` such that every exponent `k` (at the given `n`, `p`) of the
/// expressions, and `2 + p`, has `kM` integral.
pub fn exp_denominator<'a>(exprs: impl IntoIterator<Item = &'a Expression<Rational>>, n: u8, p: &Rational) -> u32 {
    let mut m = BigInt::one();
    let mut take = |k: &Rational| m = m.lcm(k.denom());
    take(&(Rational::from_integer(2.into()) + p.clone()));
    for e in exprs {
        for (t, _) in e.terms() {
            take(&exponent_value(t.exp(), n, p));
        }
    }
    m.to_u32().unwrap_or(u32::MAX)
}

fn exponent_value(x: crate::expr::ExpFactor, n: u8, p: &Rational) -> Rational {
    let r = |v: num_rational::Rational64| Rational::from_ratio64(v);
    r(x.c) + r(x.n) * Rational::from_integer(n.into()) + r(x.p) * p.clone()
}

fn concrete(i: Index, assign: &BTreeMap<Label, u8>) -> OracleResult<Slot> {
    let look = |l: Label| assign.get(&l).copied().ok_or(OracleError::UnassignedLabel(l));
    Ok(match i {
        Index::Hol(l) => Slot::Hol(look(l)?),
        Index::Anti(l) => Slot::Anti(look(l)?),
        Index::T => Slot::T,
    })
}

/// Free labels of `e`, in order.
pub fn free_labels(e: &Expression<Rational>) -> Vec<Label> {
    let mut out = BTreeSet::new();
    for (t, _) in e.terms() {
        for j in t.factors() {
            out.extend(j.indices().iter().filter_map(|i| i.label()).filter(|l| !l.is_dummy()));
        }
        for d in t.deltas() {
            out.extend([d.hol, d.anti].into_iter().filter(|l| !l.is_dummy()));
        }
    }
    out.into_iter().collect()
}

fn check_params(pt: &JetPoint, n: u8, p: &Rational) -> OracleResult<()> {
    if pt.n != n || pt.p != *p {
        return Err(OracleError::Mismatch { point_n: pt.n, point_p: pt.p.to_string(), n, p: p.to_string() });
    }
    Ok(())
}

/// Value of `e` with its free labels fixed by `free` and its dummies summed
/// over `1..=n`.
pub fn evaluate_assigned(e: &Expression<Rational>, free: &BTreeMap<Label, u8>, pt: &JetPoint) -> OracleResult<Complex> {
    let vals = [Rational::from_integer(pt.n.into()), pt.p.clone(), pt.s.clone()];
    let mut acc = Complex::zero();
    for (t, coeff) in e.terms() {
        let c = coeff.eval(&vals);
        if c.is_zero() {
            continue;
        }
        let c = c.scale(&pt.exp(&exponent_value(t.exp(), pt.n, &pt.p))?);
        let mut dummies = BTreeSet::new();
        for j in t.factors() {
            dummies.extend(j.indices().iter().filter_map(|i| i.label()).filter(|l| l.is_dummy()));
        }
        let dummies: Vec<Label> = dummies.into_iter().collect();
        let mut assign = free.clone();
        let mut digits = vec![1u8; dummies.len()];
        'outer: loop {
            for (l, v) in dummies.iter().zip(&digits) {
                assign.insert(*l, *v);
            }
            let mut m = c.clone();
            for d in t.deltas() {
                let h = assign.get(&d.hol).ok_or(OracleError::UnassignedLabel(d.hol))?;
                let a = assign.get(&d.anti).ok_or(OracleError::UnassignedLabel(d.anti))?;
                if h != a {
                    m = Complex::zero();
                }
            }
            if !m.is_zero() {
                for j in t.factors() {
                    let w = j.indices().iter().map(|i| concrete(*i, &assign)).collect::<OracleResult<CWord>>()?;
                    m = m * pt.value(&w)?;
                }
                acc += m;
            }
            for d in digits.iter_mut() {
                if *d < pt.n {
                    *d += 1;
                    continue 'outer;
                }
                *d = 1;
            }
            break;
        }
    }
    Ok(acc)
}

/// Value of a scalar (no free index) expression at `(n, p)`.
pub fn evaluate(e: &Expression<Rational>, n: u8, p: &Rational, pt: &JetPoint) -> OracleResult<Complex> {
    check_params(pt, n, p)?;
    if !free_labels(e).is_empty() {
        return Err(OracleError::FreeIndices);
    }
    evaluate_assigned(e, &BTreeMap::new(), pt)
}

/// Values of every component: one entry per assignment of the free labels
/// to `1..=n`, in lexicographic order.
pub fn evaluate_components(e: &Expression<Rational>, n: u8, p: &Rational, pt: &JetPoint) -> OracleResult<Vec<Complex>> {
    check_params(pt, n, p)?;
    let labels = free_labels(e);
    components(&labels, n).iter().map(|a| evaluate_assigned(e, a, pt)).collect()
}

/// Every assignment of `labels` to `1..=n`.
pub fn components(labels: &[Label], n: u8) -> Vec<BTreeMap<Label, u8>> {
    let mut out = vec![BTreeMap::new()];
    for l in labels {
        out = out
            .into_iter()
            .flat_map(|a| {
                (1..=n).map(move |v| {
                    let mut b = a.clone();
                    b.insert(*l, v);
                    b
                })
            })
            .collect();
    }
    out
}

/// A random `p ∈ (−2, 0)` with denominator at most 12.
pub fn random_p(rng: &mut impl Rng) -> Rational {
    let b: i64 = rng.gen_range(1..=12);
    let a: i64 = rng.gen_range(1..2 * b);
    Rational::new((-a).into(), b.into())
}

/// A random `s ∈ (0, 1)`.
pub fn random_s(rng: &mut impl Rng) -> Rational {
    let b: i64 = rng.gen_range(2..=9);
    Rational::new(rng.gen_range(1..b).into(), b.into())
}

/// A random base `ρ = e^{f/M}`, positive, away from 1.
pub fn random_rho(rng: &mut impl Rng) -> Rational {
    const CHOICES: [(i64, i64); 6] = [(3, 2), (2, 3), (5, 4), (4, 5), (2, 1), (1, 2)];
    let (a, b) = CHOICES[rng.gen_range(0..CHOICES.len())];
    Rational::new(a.into(), b.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;
    use crate::scalar::rat;

    fn pt(n: u8, seed: u64) -> JetPoint {
        JetPoint::random(n, rat(-1, 3), rat(1, 2), rat(3, 2), 3, seed).unwrap()
    }

    fn parse(s: &str) -> Expression<Rational> {
        parse_expression(s, &Default::default()).unwrap()
    }

    #[test]
    fn gradient_norm_from_table() {
        let one_i = Complex::new(rat(1, 1), rat(1, 1));
        let t = JetPoint::table(1, [(vec![Slot::Hol(1)], one_i)]).unwrap();
        let v = evaluate(&parse("df2"), 1, &Rational::zero(), &t).unwrap();
        assert_eq!(v, Complex::from_i64(2));
        let e = evaluate(&parse("f[0]"), 1, &Rational::zero(), &t).unwrap_err();
        assert_eq!(e, OracleError::MissingCoordinate("f[0]".into()));
    }

    #[test]
    fn trace_with_delta() {
        let pt = pt(2, 7);
        let v = evaluate(&parse("n*f[0]"), 2, &rat(-1, 3), &pt).unwrap();
        let f0 = pt.value(&[Slot::T]).unwrap();
        assert!(f0.is_real());
        assert_eq!(v, f0.scale(&rat(2, 1)));
        let d = evaluate(&parse("delta(a,a')"), 2, &rat(-1, 3), &pt).unwrap();
        assert_eq!(d, Complex::from_i64(2));
    }

    #[test]
    fn relations_hold_at_random_points() {
        for n in [1u8, 2, 3] {
            let pt = pt(n, 11);
            let (h, a) = (Slot::Hol(1), Slot::Anti(1));
            let two_i = Complex::new(Rational::zero(), rat(2, 1));
            // commutator
            let d = pt.value(&[h, a]).unwrap() - pt.value(&[a, h]).unwrap();
            assert_eq!(d, two_i.clone() * pt.value(&[Slot::T]).unwrap());
            // reality
            for w in [vec![h, h, a], vec![a, Slot::T, h], vec![h, h, a, a]] {
                let c: CWord = w.iter().map(|s| s.conj()).collect();
                assert_eq!(pt.value(&w).unwrap().conj(), pt.value(&c).unwrap());
            }
            // trace of the Hessian
            let mut tr = Complex::zero();
            for k in 1..=n {
                tr += pt.value(&[Slot::Hol(k), Slot::Anti(k)]).unwrap();
            }
            assert_eq!(tr, -pt.g_derivative(&[]).unwrap().scale(&Rational::from_integer(n.into())));
        }
    }

    #[test]
    fn components_and_mismatch() {
        let pt = pt(2, 3);
        let v = evaluate_components(&parse("f[a]*f[b']"), 2, &rat(-1, 3), &pt).unwrap();
        assert_eq!(v.len(), 4);
        assert!(evaluate(&parse("f[a]"), 2, &rat(-1, 3), &pt).is_err());
        assert!(matches!(evaluate(&parse("f[0]"), 1, &rat(-1, 3), &pt), Err(OracleError::Mismatch { .. })));
    }

    #[test]
    fn conjugation_commutes_with_evaluation() {
        let pt = pt(2, 5);
        let e = parse("I*f[a,b,a']*f[b'] + exp((2+p)*f)*f[a,0]*f[a'] + D[a,b]*D[a',b']");
        let p = rat(-1, 3);
        assert_eq!(evaluate(&e, 2, &p, &pt).unwrap().conj(), evaluate(&e.conj(), 2, &p, &pt).unwrap());
    }
}
