//! Named tensors of the transformed Yamabe equation and CR operators.
//!
//! With `g = |∂f|² + e^{(2+p)f} − i f_0`:
//!
//! ```text
//! D_{αβ} = f_{αβ} − 2 f_α f_β          E_{αβ̄} = f_{αβ̄} + g δ_{αβ̄}
//! D_α    = f_{αβ} f_β̄ − 2|∂f|² f_α     E_α    = f_{αβ̄} f_β + g f_α
//! G_α    = i f_{0α} + g f_α
//! ```
//!
//! Barred arguments build the complex conjugate, e.g. `D_ᾱ = conj(D_α)`.

use std::fmt;
use std::str::FromStr;

use crate::coeff::CoeffPoly;
use crate::expr::{ExpFactor, ExprError, Expression, Result};
use crate::index::{index_name, Index, Kind, Label};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum TensorName {
    D2,
    E2,
    D1,
    E1,
    G1,
    G,
    DfNorm2,
}

impl TensorName {
    pub const ALL: [TensorName; 7] =
        [TensorName::D2, TensorName::E2, TensorName::D1, TensorName::E1, TensorName::G1, TensorName::G, TensorName::DfNorm2];

    pub fn arity(self) -> usize {
        match self {
            TensorName::D2 | TensorName::E2 => 2,
            TensorName::D1 | TensorName::E1 | TensorName::G1 => 1,
            TensorName::G | TensorName::DfNorm2 => 0,
        }
    }

    /// Number of summands in the defining expansion.
    pub fn summands(self) -> usize {
        match self {
            TensorName::G => 3,
            TensorName::DfNorm2 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for TensorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TensorName::D2 => "D2",
            TensorName::E2 => "E2",
            TensorName::D1 => "D1",
            TensorName::E1 => "E1",
            TensorName::G1 => "G1",
            TensorName::G => "g",
            TensorName::DfNorm2 => "df2",
        };
        f.write_str(s)
    }
}

impl FromStr for TensorName {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        TensorName::ALL.iter().copied().find(|t| t.to_string() == s).ok_or_else(|| format!("unknown tensor {s}"))
    }
}

// builder-internal contraction labels; they become dummies immediately
const INNER: u8 = 250;

fn hol(l: u8) -> Index {
    Index::Hol(Label::Free(l))
}
fn anti(l: u8) -> Index {
    Index::Anti(Label::Free(l))
}

/// The tensor definitions, optionally with one summand's sign flipped
/// (used to check that the identity suite detects a corrupted builder).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Definitions {
    pub flip: Option<(TensorName, usize)>,
}

impl Definitions {
    pub fn standard() -> Self {
        Self::default()
    }

    pub fn with_flip(name: TensorName, summand: usize) -> Self {
        assert!(summand < name.summands(), "no summand {summand} in {name}");
        Self { flip: Some((name, summand)) }
    }

    fn sum<T: Scalar>(&self, name: TensorName, parts: Vec<Expression<T>>) -> Result<Expression<T>> {
        let mut out = Expression::zero();
        for (k, p) in parts.into_iter().enumerate() {
            let p = if self.flip == Some((name, k)) { -p } else { p };
            out = out.try_add(&p)?;
        }
        Ok(out)
    }

    pub fn df2<T: Scalar>(&self) -> Expression<T> {
        let grad = Expression::jet(&[hol(INNER)]) * Expression::jet(&[anti(INNER)]);
        self.sum(TensorName::DfNorm2, vec![grad]).expect("scalar")
    }

    pub fn g<T: Scalar>(&self) -> Expression<T> {
        let parts = vec![
            Expression::jet(&[hol(INNER)]) * Expression::jet(&[anti(INNER)]),
            Expression::exp(ExpFactor::int(2, 0, 1)),
            -(Expression::i() * Expression::jet(&[Index::T])),
        ];
        self.sum(TensorName::G, parts).expect("scalar")
    }

    fn d2_hol<T: Scalar>(&self, a: Index, b: Index) -> Result<Expression<T>> {
        let two = Expression::from_i64(2);
        let parts = vec![Expression::try_jet(&[a, b])?, -(two * Expression::jet(&[a]).try_mul(&Expression::jet(&[b]))?)];
        self.sum(TensorName::D2, parts)
    }

    fn e2_mixed<T: Scalar>(&self, a: Index, b: Index) -> Result<Expression<T>> {
        let (Some(la), Some(lb)) = (a.label(), b.label()) else { unreachable!() };
        let parts = vec![Expression::try_jet(&[a, b])?, self.g().try_mul(&Expression::delta(la, lb))?];
        self.sum(TensorName::E2, parts)
    }

    fn d1_hol<T: Scalar>(&self, a: Index) -> Result<Expression<T>> {
        let two = Expression::from_i64(2);
        let parts = vec![
            Expression::try_jet(&[a, hol(INNER - 1)])?.try_mul(&Expression::jet(&[anti(INNER - 1)]))?,
            -(two * self.df2().try_mul(&Expression::jet(&[a]))?),
        ];
        self.sum(TensorName::D1, parts)
    }

    fn e1_hol<T: Scalar>(&self, a: Index) -> Result<Expression<T>> {
        let parts = vec![
            Expression::try_jet(&[a, anti(INNER - 1)])?.try_mul(&Expression::jet(&[hol(INNER - 1)]))?,
            self.g().try_mul(&Expression::jet(&[a]))?,
        ];
        self.sum(TensorName::E1, parts)
    }

    fn g1_hol<T: Scalar>(&self, a: Index) -> Result<Expression<T>> {
        let parts = vec![Expression::i().try_mul(&Expression::try_jet(&[Index::T, a])?)?, self.g().try_mul(&Expression::jet(&[a]))?];
        self.sum(TensorName::G1, parts)
    }

    /// Expands `name[args]` into jets. Argument kinds select the tensor or its
    /// conjugate; any other combination is an arity error.
    pub fn build<T: Scalar>(&self, name: TensorName, args: &[Index]) -> Result<Expression<T>> {
        let bad = || {
            let names: Vec<String> = args.iter().map(|i| index_name(*i)).collect();
            ExprError::Arity(format!("{name}[{}]", names.join(",")))
        };
        if args.len() != name.arity() || args.contains(&Index::T) {
            return Err(bad());
        }
        let kinds: Vec<Kind> = args.iter().map(|i| i.kind()).collect();
        let conj = |x: Index| x.conj();
        match (name, kinds.as_slice()) {
            (TensorName::G, []) => Ok(self.g()),
            (TensorName::DfNorm2, []) => Ok(self.df2()),
            (TensorName::D2, [Kind::Hol, Kind::Hol]) => self.d2_hol(args[0], args[1]),
            (TensorName::D2, [Kind::Anti, Kind::Anti]) => Ok(self.d2_hol(conj(args[0]), conj(args[1]))?.conj()),
            (TensorName::E2, [Kind::Hol, Kind::Anti]) => self.e2_mixed(args[0], args[1]),
            (TensorName::E2, [Kind::Anti, Kind::Hol]) => Ok(self.e2_mixed(conj(args[0]), conj(args[1]))?.conj()),
            (TensorName::D1, [Kind::Hol]) => self.d1_hol(args[0]),
            (TensorName::D1, [Kind::Anti]) => Ok(self.d1_hol(conj(args[0]))?.conj()),
            (TensorName::E1, [Kind::Hol]) => self.e1_hol(args[0]),
            (TensorName::E1, [Kind::Anti]) => Ok(self.e1_hol(conj(args[0]))?.conj()),
            (TensorName::G1, [Kind::Hol]) => self.g1_hol(args[0]),
            (TensorName::G1, [Kind::Anti]) => Ok(self.g1_hol(conj(args[0]))?.conj()),
            _ => Err(bad()),
        }
    }
}

/// `Re Z_ᾱ V_α` for `V` with exactly one free holomorphic index.
pub fn divergence<T: Scalar>(v: &Expression<T>) -> Result<Expression<T>> {
    let sig = v.signature().unwrap_or_default();
    let names = || sig.iter().map(|i| index_name(*i)).collect::<Vec<_>>().join(", ");
    let [Index::Hol(l)] = sig.iter().copied().collect::<Vec<_>>()[..] else {
        return Err(ExprError::BadDivergence(names()));
    };
    v.z_derivative(Index::Anti(l))?.re_part()
}

/// `f_{αβᾱ}` minus `2(n+1)G_β − n ḡ_β − 2(n+1) f_β g`, unnormalized; `β` is
/// free label `b`.
pub fn third_order_difference<T: Scalar>(defs: &Definitions) -> Result<Expression<T>> {
    let (a, b) = (0u8, 1u8);
    let lhs = Expression::try_jet(&[hol(a), hol(b), anti(a)])?;
    let n1 = Expression::constant(CoeffPoly::var(crate::coeff::Var::N) + CoeffPoly::from_i64(1));
    let n = Expression::var(crate::coeff::Var::N);
    let gbar_b = defs.g::<T>().conj().z_derivative(hol(b))?;
    let rhs = (Expression::from_i64(2) * n1.clone()).try_mul(&defs.build(TensorName::G1, &[hol(b)])?)?
        - n.try_mul(&gbar_b)?
        - (Expression::from_i64(2) * n1).try_mul(&Expression::jet(&[hol(b)]).try_mul(&defs.g())?)?;
    lhs.try_sub(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::{normalize, RewriteConfig};
    use num_rational::BigRational;

    type E = Expression<BigRational>;

    fn norm(e: &E) -> E {
        normalize(e, &RewriteConfig::default()).unwrap()
    }

    #[test]
    fn e1_is_e2_contracted_with_gradient() {
        let d = Definitions::standard();
        let e1: E = d.build(TensorName::E1, &[hol(0)]).unwrap();
        let e2: E = d.build(TensorName::E2, &[hol(0), anti(1)]).unwrap();
        assert!(norm(&(e1 - e2 * E::jet(&[hol(1)]))).is_zero());
    }

    #[test]
    fn e2_trace_needs_the_equation() {
        let d = Definitions::standard();
        let tr: E = d.build(TensorName::E2, &[hol(0), anti(0)]).unwrap();
        assert!(!normalize(&tr, &RewriteConfig::with_pde(false)).unwrap().is_zero());
        assert!(norm(&tr).is_zero());
    }

    #[test]
    fn conjugate_arguments() {
        let d = Definitions::standard();
        let x: E = d.build(TensorName::D1, &[anti(0)]).unwrap();
        assert_eq!(x, d.build::<BigRational>(TensorName::D1, &[hol(0)]).unwrap().conj());
        assert!(d.build::<BigRational>(TensorName::E2, &[hol(0), hol(1)]).is_err());
        assert!(d.build::<BigRational>(TensorName::G1, &[]).is_err());
    }

    #[test]
    fn third_order_identity() {
        let d = Definitions::standard();
        let diff: E = third_order_difference(&d).unwrap();
        assert!(norm(&diff).is_zero());
        assert!(!normalize(&diff, &RewriteConfig::with_pde(false)).unwrap().is_zero());
    }

    #[test]
    fn divergence_signature_check() {
        let d = Definitions::standard();
        let g1: E = d.build(TensorName::G1, &[hol(0)]).unwrap();
        assert!(divergence(&g1).is_ok());
        assert!(divergence(&E::jet(&[anti(0)])).is_err());
    }
}
