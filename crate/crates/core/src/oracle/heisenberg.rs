//! Exact differentiation of explicit functions on `ℍⁿ`.
//!
//! Functions are finite sums `Σ P_{ab}(z, z̄, t) wᵃ w̄ᵇ` with polynomial `P`
//! and `w = t + i z·z̄ + z·μ + λ`. The vector fields
//! `Z_α = ∂/∂z^α + i z̄^α ∂/∂t`, `Z_ᾱ = ∂/∂z̄^α − i z^α ∂/∂t` and `∂/∂t` map
//! this class to itself:
//!
//! ```text
//! Z_α w = 2i z̄^α + μ_α    Z_α w̄ = 0
//! Z_ᾱ w = 0               Z_ᾱ w̄ = μ̄_α − 2i z^α
//! ```

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::gaussian::Gaussian;
use crate::Rational;

use super::jets::{Complex, Slot};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum HeisenbergError {
    #[error("slot {0:?} is outside 1..{1}")]
    BadSlot(Slot, usize),
    #[error("point has dimension {0}, function has {1}")]
    Dimension(usize, usize),
    #[error("w^{0} w̄^{1} has no exact value; use floating evaluation")]
    Inexact(String, String),
    #[error("w^{0} w̄^{1} is multivalued")]
    Multivalued(String, String),
    #[error("w vanishes at this point")]
    Singular,
}

/// Polynomial in `z_1..z_n, z̄_1..z̄_n, t` with Gaussian-rational
/// coefficients. Exponent vectors are `[z.., z̄.., t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub n: usize,
    terms: BTreeMap<Vec<u16>, Complex>,
}

impl Poly {
    pub fn zero(n: usize) -> Poly {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex) -> Poly {
        let mut p = Poly::zero(n);
        p.add_term(vec![0; 2 * n + 1], c);
        p
    }

    fn unit(n: usize, slot: usize) -> Poly {
        let mut e = vec![0; 2 * n + 1];
        e[slot] = 1;
        let mut p = Poly::zero(n);
        p.add_term(e, Complex::one());
        p
    }

    /// `z^k`, `1 ≤ k ≤ n`.
    pub fn z(n: usize, k: usize) -> Poly {
        Poly::unit(n, k - 1)
    }

    /// `z̄^k`.
    pub fn zbar(n: usize, k: usize) -> Poly {
        Poly::unit(n, n + k - 1)
    }

    pub fn t(n: usize) -> Poly {
        Poly::unit(n, 2 * n)
    }

    /// Random polynomial of total degree at most `degree` with small
    /// Gaussian-rational coefficients.
    pub fn random(n: usize, degree: u16, terms: usize, rng: &mut impl Rng) -> Poly {
        let mut p = Poly::zero(n);
        for _ in 0..terms {
            let mut e = vec![0u16; 2 * n + 1];
            for _ in 0..rng.gen_range(0..=degree) {
                e[rng.gen_range(0..2 * n + 1)] += 1;
            }
            let mut part = || Rational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into());
            let c = Complex::new(part(), part());
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u16>, c: Complex) {
        let slot = self.terms.entry(e).or_insert_with(Complex::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Complex) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x.clone() * y.clone());
            }
        }
        out
    }

    /// Partial derivative in variable slot `v`.
    fn partial(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut d = e.clone();
                d[v] -= 1;
                out.add_term(d, c.scale(&Rational::from_integer(e[v].into())));
            }
        }
        out
    }

    /// Applies one vector field.
    pub fn apply(&self, s: Slot) -> Poly {
        let n = self.n;
        let i = Complex::i();
        match s {
            Slot::Hol(k) => {
                let k = usize::from(k);
                self.partial(k - 1).add(&Poly::zbar(n, k).mul(&self.partial(2 * n)).scale(&i))
            }
            Slot::Anti(k) => {
                let k = usize::from(k);
                self.partial(n + k - 1).add(&Poly::z(n, k).mul(&self.partial(2 * n)).scale(&-i))
            }
            Slot::T => self.partial(2 * n),
        }
    }

    pub fn eval<T: crate::Scalar>(&self, z: &[Gaussian<T>], t: &T) -> Gaussian<T> {
        let n = self.n;
        let mut acc = Gaussian::zero();
        for (e, c) in &self.terms {
            let mut m = c.map(T::from_rational);
            for k in 0..n {
                m = m * z[k].powi(e[k].into()) * z[k].conj().powi(e[n + k].into());
            }
            m = m.scale(&crate::scalar::powi(t, e[2 * n].into()));
            acc += m;
        }
        acc
    }
}

/// `Σ P_{ab} wᵃ w̄ᵇ` for fixed `λ`, `μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoly {
    pub n: usize,
    pub lambda: Complex,
    pub mu: Vec<Complex>,
    parts: BTreeMap<(Rational, Rational), Poly>,
}

impl HPoly {
    /// A polynomial in `z, z̄, t`.
    pub fn polynomial(p: Poly) -> HPoly {
        let n = p.n;
        let mut parts = BTreeMap::new();
        if !p.is_zero() {
            parts.insert((Rational::zero(), Rational::zero()), p);
        }
        HPoly { n, lambda: Complex::zero(), mu: vec![Complex::zero(); n], parts }
    }

    /// `|t + i z·z̄ + z·μ + λ|^{−n} = (w w̄)^{−n/2}`.
    pub fn yamabe_kernel(lambda: Complex, mu: Vec<Complex>) -> HPoly {
        let n = mu.len();
        let e = Rational::new(num_bigint::BigInt::from(-(n as i64)), 2.into());
        let mut parts = BTreeMap::new();
        parts.insert((e.clone(), e), Poly::constant(n, Complex::one()));
        HPoly { n, lambda, mu, parts }
    }

    fn insert(&mut self, key: (Rational, Rational), p: Poly) {
        if p.is_zero() {
            return;
        }
        let merged = match self.parts.remove(&key) {
            Some(q) => q.add(&p),
            None => p,
        };
        if !merged.is_zero() {
            self.parts.insert(key, merged);
        }
    }

    /// `Z w` and `Z w̄` as polynomials.
    fn dw(&self, s: Slot) -> (Poly, Poly) {
        let n = self.n;
        let two_i = Complex::new(Rational::zero(), Rational::from_integer(2.into()));
        match s {
            Slot::Hol(k) => {
                let k = usize::from(k);
                (Poly::zbar(n, k).scale(&two_i).add(&Poly::constant(n, self.mu[k - 1].clone())), Poly::zero(n))
            }
            Slot::Anti(k) => {
                let k = usize::from(k);
                (Poly::zero(n), Poly::constant(n, self.mu[k - 1].conj()).add(&Poly::z(n, k).scale(&-two_i)))
            }
            Slot::T => (Poly::constant(n, Complex::one()), Poly::constant(n, Complex::one())),
        }
    }

    pub fn apply(&self, s: Slot) -> Result<HPoly, HeisenbergError> {
        if let Slot::Hol(k) | Slot::Anti(k) = s {
            if k == 0 || usize::from(k) > self.n {
                return Err(HeisenbergError::BadSlot(s, self.n));
            }
        }
        let (dw, dwb) = self.dw(s);
        let one = Rational::one();
        let mut out = HPoly { parts: BTreeMap::new(), ..self.clone() };
        for ((a, b), p) in &self.parts {
            out.insert((a.clone(), b.clone()), p.apply(s));
            if !a.is_zero() {
                out.insert((a - &one, b.clone()), p.mul(&dw).scale(&Complex::real(a.clone())));
            }
            if !b.is_zero() {
                out.insert((a.clone(), b - &one), p.mul(&dwb).scale(&Complex::real(b.clone())));
            }
        }
        Ok(out)
    }

    pub fn apply_word(&self, word: &[Slot]) -> Result<HPoly, HeisenbergError> {
        word.iter().try_fold(self.clone(), |f, s| f.apply(*s))
    }

    fn w_at<T: crate::Scalar>(&self, z: &[Gaussian<T>], t: &T) -> Gaussian<T> {
        let mut w = Gaussian::real(t.clone()) + self.lambda.map(T::from_rational);
        for (zk, mk) in z.iter().zip(&self.mu) {
            w = w + Gaussian::<T>::i() * zk.clone() * zk.conj() + zk.clone() * mk.map(T::from_rational);
        }
        w
    }

    /// Exact value; every exponent must be an integer.
    pub fn eval(&self, pt: &HPoint) -> Result<Complex, HeisenbergError> {
        if pt.z.len() != self.n {
            return Err(HeisenbergError::Dimension(pt.z.len(), self.n));
        }
        let w = self.w_at(&pt.z, &pt.t);
        let mut acc = Complex::zero();
        for ((a, b), p) in &self.parts {
            let mut v = p.eval(&pt.z, &pt.t);
            if !(a.is_zero() && b.is_zero()) {
                if !a.is_integer() || !b.is_integer() {
                    return Err(HeisenbergError::Inexact(a.to_string(), b.to_string()));
                }
                v = v * int_pow(&w, a.to_integer().to_i64().unwrap())? * int_pow(&w.conj(), b.to_integer().to_i64().unwrap())?;
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Floating value; `a − b` must be an integer in every part.
    pub fn eval_f64(&self, pt: &HPointF64) -> Result<Gaussian<f64>, HeisenbergError> {
        if pt.z.len() != self.n {
            return Err(HeisenbergError::Dimension(pt.z.len(), self.n));
        }
        let w = self.w_at(&pt.z, &pt.t);
        let mod2 = w.norm_sqr();
        if mod2 == 0.0 {
            return Err(HeisenbergError::Singular);
        }
        let mut acc = Gaussian::<f64>::zero();
        for ((a, b), p) in &self.parts {
            let d = a - b;
            if !d.is_integer() {
                return Err(HeisenbergError::Multivalued(a.to_string(), b.to_string()));
            }
            // wᵃ w̄ᵇ = |w|^{2b} w^{a−b}
            let radial = mod2.powf(b.to_f64().unwrap_or(f64::NAN));
            let phase = int_pow(&w, d.to_integer().to_i64().unwrap())?;
            acc += p.eval(&pt.z, &pt.t) * phase.scale(&radial);
        }
        Ok(acc)
    }
}

fn int_pow<T: crate::Scalar>(w: &Gaussian<T>, e: i64) -> Result<Gaussian<T>, HeisenbergError> {
    let base = if e < 0 { w.inv().ok_or(HeisenbergError::Singular)? } else { w.clone() };
    Ok(base.powi(e.unsigned_abs() as u32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPoint {
    pub z: Vec<Complex>,
    pub t: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPointF64 {
    pub z: Vec<Gaussian<f64>>,
    pub t: f64,
}

impl HPoint {
    pub fn random(n: usize, rng: &mut impl Rng) -> HPoint {
        let mut part = || Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into());
        let z = (0..n).map(|_| Complex::new(part(), part())).collect();
        HPoint { z, t: part() }
    }
}

impl HPointF64 {
    pub fn random(n: usize, rng: &mut impl Rng) -> HPointF64 {
        let z = (0..n).map(|_| Gaussian::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        HPointF64 { z, t: rng.gen_range(-3.0..3.0) }
    }
}

/// Applies `word` (left to right) to `f` and evaluates exactly at `pt`.
pub fn z_apply(f: &HPoly, word: &[Slot], pt: &HPoint) -> Result<Complex, HeisenbergError> {
    f.apply_word(word)?.eval(pt)
}

/// Floating counterpart of [`z_apply`], for non-integral powers of `|w|`.
pub fn z_apply_f64(f: &HPoly, word: &[Slot], pt: &HPointF64) -> Result<Gaussian<f64>, HeisenbergError> {
    f.apply_word(word)?.eval_f64(pt)
}
