//! Exact abstract-index jet calculus on the Heisenberg group.
//!
//! Expressions are sums of monomials in the derivatives of a real scalar `f`
//! on `ℍⁿ`, with coefficients in `ℚ(i)[n,p,s]`. The [`normalize`] rewriter
//! sorts derivative words with the commutation rule
//! `f_{αβ̄} − f_{β̄α} = 2i δ_{αβ̄} f_0` and optionally eliminates Hessian
//! traces with `f_{αᾱ} = −n g`, so that an identity holds iff the difference
//! of its sides normalizes to the empty expression.
//!
//! Everything is generic over a [`Scalar`]; the aliases below fix the exact
//! rational field used for verification.

pub mod coeff;
pub mod cr;
pub mod expr;
pub mod gaussian;
pub mod identities;
pub mod index;
pub mod normalize;
pub mod oracle;
pub mod parser;
pub mod scalar;

pub use coeff::{CoeffPoly, Var};
pub use cr::{Definitions, TensorName};
pub use expr::{ExpFactor, ExprError, Expression, Term};
pub use gaussian::Gaussian;
pub use index::{Delta, Index, Jet, Kind, Label};
pub use normalize::{g_definition, jet_derivative_of_g, normalize, RewriteConfig};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Exact expression over `ℚ(i)[n,p,s]`.
pub type Expr = Expression<Rational>;
/// Exact coefficient polynomial.
pub type Coeff = CoeffPoly<Rational>;
/// Floating expression, for fast approximate evaluation.
pub type ExprF64 = Expression<f64>;
