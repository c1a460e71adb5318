//! Scalar field abstraction.
//!
//! Every algebraic structure in the crate is generic over a [`Scalar`]: the
//! exact field of rationals for verification, or `f32`/`f64` for fast
//! floating evaluation. Zero tests on floating scalars are exact comparisons,
//! so only [`BigRational`] gives a meaningful identity check.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, Signed, ToPrimitive, Zero};

pub trait Scalar: Num + Clone + Debug + Display + PartialEq + PartialOrd + Send + Sync + 'static {
    /// `true` when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    fn from_ratio64(r: Rational64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
    }

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    fn as_f64(&self) -> f64;

    /// Exact small rational value, when this field can provide one.
    fn to_ratio64(&self) -> Option<Rational64> {
        None
    }

    /// `self^exp` for `self > 0`. `None` when the result is not representable
    /// in this field (e.g. an irrational power of a rational).
    fn pow_rational(&self, exp: &BigRational) -> Option<Self>;

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            Self::zero() - self.clone()
        } else {
            self.clone()
        }
    }
}

/// Integer power by squaring; negative exponents invert.
pub fn powi<T: Scalar>(base: &T, exp: i64) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        e >>= 1;
    }
    if exp < 0 {
        T::one() / acc
    } else {
        acc
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_ratio64(&self) -> Option<Rational64> {
        Some(Rational64::new(self.numer().to_i64()?, self.denom().to_i64()?))
    }

    fn pow_rational(&self, exp: &BigRational) -> Option<Self> {
        if exp.is_integer() {
            let e = exp.to_integer().to_i64()?;
            if self.is_zero() && e < 0 {
                return None;
            }
            return Some(powi(self, e));
        }
        if !self.is_positive() {
            return None;
        }
        // exact only when self is a perfect power of the exponent's denominator
        let den = exp.denom().to_u32()?;
        let num = exp.numer().to_i64()?;
        let root_n = integer_root(self.numer(), den)?;
        let root_d = integer_root(self.denom(), den)?;
        Some(powi(&BigRational::new(root_n, root_d), num))
    }
}

fn integer_root(v: &BigInt, k: u32) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.nth_root(k);
    if r.pow(k) == *v {
        Some(r)
    } else {
        None
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(r: &BigRational) -> Self {
                Scalar::as_f64(r) as $t
            }

            fn as_f64(&self) -> f64 {
                *self as f64
            }

            fn pow_rational(&self, exp: &BigRational) -> Option<Self> {
                if *self < 0.0 {
                    return None;
                }
                Some(self.powf(Scalar::as_f64(exp) as $t))
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

/// Parses `a`, `-a`, `a/b` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rational_powers() {
        let x = rat(4, 9);
        assert_eq!(x.pow_rational(&rat(1, 2)), Some(rat(2, 3)));
        assert_eq!(x.pow_rational(&rat(-3, 2)), Some(rat(27, 8)));
        assert_eq!(rat(2, 1).pow_rational(&rat(1, 2)), None);
        assert_eq!(rat(2, 3).pow_rational(&rat(-2, 1)), Some(rat(9, 4)));
    }

    #[test]
    fn float_powers() {
        let v = 2f64.pow_rational(&rat(1, 2)).unwrap();
        assert!((v - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((-1f64).pow_rational(&rat(1, 2)).is_none());
    }

    #[test]
    fn big_rational_to_f64() {
        assert_eq!(rat(3, 4).as_f64(), 0.75);
        let huge = BigRational::from_integer(BigInt::from(10).pow(400)) / BigInt::from(10).pow(399);
        assert!((huge.as_f64() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
