//! Sparse polynomials in the indeterminates `n`, `p` and `s` with Gaussian
//! coefficients.
//!
//! `n` is the CR dimension, `p` the exponent offset, and `s` the free
//! weighting parameter used when rearranging sums of squares. Zero entries are
//! never stored, so the zero polynomial is the empty map.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::gaussian::Gaussian;
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    N,
    P,
    S,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::N, Var::P, Var::S];

    pub fn slot(self) -> usize {
        match self {
            Var::N => 0,
            Var::P => 1,
            Var::S => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::N => "n",
            Var::P => "p",
            Var::S => "s",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "n" => Some(Var::N),
            "p" => Some(Var::P),
            "s" => Some(Var::S),
            _ => None,
        }
    }
}

/// Exponent vector `(deg_n, deg_p, deg_s)`.
pub type Degrees = [u16; 3];

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoeffPoly<T> {
    terms: BTreeMap<Degrees, Gaussian<T>>,
}

impl<T: Scalar> Default for CoeffPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> CoeffPoly<T> {
    pub fn constant(c: Gaussian<T>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 3], c);
        }
        Self { terms }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(Gaussian::from_i64(v))
    }

    pub fn real(v: T) -> Self {
        Self::constant(Gaussian::real(v))
    }

    pub fn i() -> Self {
        Self::constant(Gaussian::i())
    }

    pub fn var(v: Var) -> Self {
        let mut d = [0; 3];
        d[v.slot()] = 1;
        Self::monomial(d, Gaussian::one())
    }

    pub fn monomial(d: Degrees, c: Gaussian<T>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(d, c);
        }
        Self { terms }
    }

    /// `a + b·n + c·p` with rational coefficients.
    pub fn affine(a: &T, b: &T, c: &T) -> Self {
        Self::real(a.clone()) + Self::var(Var::N) * Self::real(b.clone()) + Self::var(Var::P) * Self::real(c.clone())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Degrees, &Gaussian<T>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<Gaussian<T>> {
        match self.terms.len() {
            0 => Some(Gaussian::zero()),
            1 => self.terms.get(&[0; 3]).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self, v: Var) -> u16 {
        self.terms.keys().map(|d| d[v.slot()]).max().unwrap_or(0)
    }

    /// Every term carries at least one factor of `v`.
    pub fn divisible_by(&self, v: Var) -> bool {
        self.terms.keys().all(|d| d[v.slot()] > 0)
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(d, c)| (*d, c.conj())).collect() }
    }

    pub fn scale(&self, k: &Gaussian<T>) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(d, c)| (*d, c * k)).collect() }
    }

    fn add_term(&mut self, d: Degrees, c: Gaussian<T>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at `values = [n, p, s]`.
    pub fn eval(&self, values: &[T; 3]) -> Gaussian<T> {
        let mut acc = Gaussian::zero();
        for (d, c) in &self.terms {
            let mut m = T::one();
            for (k, v) in d.iter().zip(values) {
                for _ in 0..*k {
                    m = m * v.clone();
                }
            }
            acc += c.scale(&m);
        }
        acc
    }

    /// Replaces `v` by the constant `value`.
    pub fn substitute(&self, v: Var, value: &T) -> Self {
        let mut out = Self::zero();
        for (d, c) in &self.terms {
            let mut m = T::one();
            for _ in 0..d[v.slot()] {
                m = m * value.clone();
            }
            let mut nd = *d;
            nd[v.slot()] = 0;
            out.add_term(nd, c.scale(&m));
        }
        out
    }

    /// `den^total · self|_{v = num/den}`; requires `total >= self.degree(v)`.
    pub fn substitute_fraction(&self, v: Var, num: &Self, den: &Self, total: u16) -> Self {
        assert!(total >= self.degree(v), "substitution degree too small");
        let mut out = Self::zero();
        for (d, c) in &self.terms {
            let k = d[v.slot()];
            let mut nd = *d;
            nd[v.slot()] = 0;
            let rest = Self::monomial(nd, c.clone());
            out = out + &(&rest * &num.pow(u32::from(k))) * &den.pow(u32::from(total - k));
        }
        out
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CoeffPoly<U> {
        let mut out = CoeffPoly::zero();
        for (d, c) in &self.terms {
            out.add_term(*d, c.map(&f));
        }
        out
    }
}

impl<T: Scalar> Zero for CoeffPoly<T> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Scalar> One for CoeffPoly<T> {
    fn one() -> Self {
        Self::from_i64(1)
    }
}

impl<'a, T: Scalar> Add<&'a CoeffPoly<T>> for &'a CoeffPoly<T> {
    type Output = CoeffPoly<T>;
    fn add(self, rhs: &CoeffPoly<T>) -> CoeffPoly<T> {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(*d, c.clone());
        }
        out
    }
}

impl<T: Scalar> Add for CoeffPoly<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (d, c) in rhs.terms {
            self.add_term(d, c);
        }
        self
    }
}

impl<'a, T: Scalar> Sub<&'a CoeffPoly<T>> for &'a CoeffPoly<T> {
    type Output = CoeffPoly<T>;
    fn sub(self, rhs: &CoeffPoly<T>) -> CoeffPoly<T> {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(*d, -c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for CoeffPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<'a, T: Scalar> Mul<&'a CoeffPoly<T>> for &'a CoeffPoly<T> {
    type Output = CoeffPoly<T>;
    fn mul(self, rhs: &CoeffPoly<T>) -> CoeffPoly<T> {
        let mut out = CoeffPoly::zero();
        for (da, ca) in &self.terms {
            for (db, cb) in &rhs.terms {
                let d = [da[0] + db[0], da[1] + db[1], da[2] + db[2]];
                out.add_term(d, ca * cb);
            }
        }
        out
    }
}

impl<T: Scalar> Mul for CoeffPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for CoeffPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(d, c)| (d, -c)).collect() }
    }
}

impl<T: Scalar> Neg for &CoeffPoly<T> {
    type Output = CoeffPoly<T>;
    fn neg(self) -> CoeffPoly<T> {
        -self.clone()
    }
}

fn fmt_monomial(d: &Degrees) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        match d[v.slot()] {
            0 => {}
            1 => parts.push(v.name().to_string()),
            k => parts.push(format!("{}^{}", v.name(), k)),
        }
    }
    parts.join("*")
}

fn is_minus_one<T: Scalar>(t: &T) -> bool {
    (t.clone() + T::one()).is_zero()
}

/// One term in grammar syntax, e.g. `-3/2*n*p^2*I`.
fn fmt_term<T: Scalar>(d: &Degrees, c: &Gaussian<T>) -> String {
    let mono = fmt_monomial(d);
    if mono.is_empty() {
        return fmt_number(c);
    }
    if c.im.is_zero() {
        if c.re.is_one() {
            mono
        } else if is_minus_one(&c.re) {
            format!("-{mono}")
        } else {
            format!("{}*{mono}", c.re)
        }
    } else if c.re.is_zero() {
        if c.im.is_one() {
            format!("{mono}*I")
        } else if is_minus_one(&c.im) {
            format!("-{mono}*I")
        } else {
            format!("{}*{mono}*I", c.im)
        }
    } else {
        format!("{}*{mono}", fmt_number(c))
    }
}

/// A Gaussian number in grammar syntax; parenthesized when both parts are
/// nonzero.
pub fn fmt_number<T: Scalar>(c: &Gaussian<T>) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => format!("{}", c.re),
        (true, false) => {
            if c.im.is_one() {
                "I".to_string()
            } else if is_minus_one(&c.im) {
                "-I".to_string()
            } else {
                format!("{}*I", c.im)
            }
        }
        (false, false) => {
            let im = fmt_number(&Gaussian::new(T::zero(), c.im.clone()));
            if let Some(rest) = im.strip_prefix('-') {
                format!("({} - {rest})", c.re)
            } else {
                format!("({} + {im})", c.re)
            }
        }
    }
}

impl<T: Scalar> fmt::Display for CoeffPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (d, c)) in self.terms.iter().rev().enumerate() {
            let t = fmt_term(d, c);
            if k == 0 {
                write!(f, "{t}")?;
            } else if let Some(rest) = t.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {t}")?;
            }
        }
        Ok(())
    }
}
