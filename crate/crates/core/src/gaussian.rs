//! Complex numbers over an arbitrary scalar field.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// `re + im·i` with components in `T`. Over the rationals this is the field of
/// Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn real(re: T) -> Self {
        Self { re, im: T::zero() }
    }

    pub fn i() -> Self {
        Self { re: T::zero(), im: T::one() }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::real(T::from_i64(v))
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: T::zero() - self.im.clone() }
    }

    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self { re: self.re.clone() * k.clone(), im: self.im.clone() * k.clone() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let d = self.norm_sqr();
        if d.is_zero() {
            return None;
        }
        Some(Self { re: self.re.clone() / d.clone(), im: (T::zero() - self.im.clone()) / d })
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Gaussian<U> {
        Gaussian { re: f(&self.re), im: f(&self.im) }
    }
}

impl<T: Scalar> Zero for Gaussian<T> {
    fn zero() -> Self {
        Self { re: T::zero(), im: T::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: Scalar> One for Gaussian<T> {
    fn one() -> Self {
        Self::real(T::one())
    }
}

impl<T: Scalar> Add for Gaussian<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<T: Scalar> AddAssign for Gaussian<T> {
    fn add_assign(&mut self, rhs: Self) {
        let lhs = std::mem::replace(self, Self::zero());
        *self = lhs + rhs;
    }
}

impl<T: Scalar> Sub for Gaussian<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<T: Scalar> SubAssign for Gaussian<T> {
    fn sub_assign(&mut self, rhs: Self) {
        let lhs = std::mem::replace(self, Self::zero());
        *self = lhs - rhs;
    }
}

impl<T: Scalar> Mul for Gaussian<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Self { re, im }
    }
}

impl<'a, T: Scalar> Mul<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn mul(self, rhs: &Gaussian<T>) -> Gaussian<T> {
        self.clone() * rhs.clone()
    }
}

impl<T: Scalar> Div for Gaussian<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero")
    }
}

impl<T: Scalar> Neg for Gaussian<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: T::zero() - self.re, im: T::zero() - self.im }
    }
}

impl<T: Scalar> fmt::Display for Gaussian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*I", self.im),
            (false, false) => write!(f, "({} + {}*I)", self.re, self.im),
        }
    }
}
