//! The identity catalog compiled to "LHS − RHS normalizes to zero" checks,
//! the sum-of-squares chain and the coefficient positivity check.

mod positivity;
mod sos;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::Var;
use crate::expr::{ExprError, Expression};
use crate::normalize::{normalize, RewriteConfig};
use crate::parser::{print, Catalog, ParseError, ParseOptions};
use crate::Rational;

pub use positivity::{check_positivity, sos_coefficients, CertificateLine, PositivityFailure, PositivityReport};
pub use sos::{verify_sos_chain, SOS_S0_ID, SOS_S1_ID};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SuiteError {
    #[error("{id}: {source}")]
    Parse { id: String, source: ParseError },
    #[error("{id}: {source}")]
    Expr { id: String, source: ExprError },
}

/// One displayed equation: `lhs == rhs` as exact expressions.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub id: String,
    /// Short formula the case was transcribed from.
    pub anchor: String,
    pub requires_pde: bool,
    pub lhs: Expression<Rational>,
    pub rhs: Expression<Rational>,
}

/// Compiles every case of a catalog with the given tensor definitions.
pub fn compile_catalog(cat: &Catalog, opts: &ParseOptions) -> Result<Vec<IdentityCase>, SuiteError> {
    let scope = cat.scope::<Rational>(opts).map_err(|source| SuiteError::Parse { id: "@def".into(), source })?;
    cat.cases
        .iter()
        .map(|c| {
            let (lhs, rhs) = scope.identity_at(&c.body, c.pos).map_err(|source| SuiteError::Parse { id: c.id.clone(), source })?;
            Ok(IdentityCase { id: c.id.clone(), anchor: c.anchor.clone(), requires_pde: c.requires_pde, lhs, rhs })
        })
        .collect()
}

/// The compiled builtin catalog.
pub fn builtin_cases() -> Vec<IdentityCase> {
    compile_catalog(&Catalog::builtin(), &ParseOptions::default()).expect("builtin catalog compiles")
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Term cap and rule-order shuffling; `use_pde` is taken from each case.
    pub rewrite: RewriteConfig,
    /// Indeterminates fixed to values before normalization.
    pub set: Vec<(Var, Rational)>,
    /// Cross-check at random jet points after the symbolic run.
    pub oracle: Option<OracleOptions>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub n_values: Vec<u8>,
    pub points: usize,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { n_values: vec![1, 2], points: 100, seed: 0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OracleSummary {
    pub n_values: Vec<u32>,
    pub points: usize,
    /// Evaluations of `lhs − rhs` that were not exactly zero.
    pub nonzero: usize,
    /// Whether the numeric verdict matches the symbolic one.
    pub agrees: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub anchor: String,
    pub passed: bool,
    pub pde_used: bool,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub residual_terms: usize,
    /// Printed residual, empty on success.
    pub residual: String,
    pub error: Option<String>,
    pub oracle: Option<OracleSummary>,
    pub wall_ms: u128,
}

impl VerificationReport {
    pub fn failed(id: &str, anchor: &str, error: String) -> Self {
        Self { id: id.into(), anchor: anchor.into(), error: Some(error), ..Self::default() }
    }

    /// Pass means a zero residual and, when the oracle ran, agreement.
    pub fn ok(&self) -> bool {
        self.passed && self.error.is_none() && self.oracle.as_ref().is_none_or(|o| o.agrees)
    }
}

/// Applies `opts.set` to both sides.
pub fn specialize_case(case: &IdentityCase, set: &[(Var, Rational)]) -> IdentityCase {
    let mut c = case.clone();
    for (v, x) in set {
        c.lhs = c.lhs.specialize(*v, x);
        c.rhs = c.rhs.specialize(*v, x);
    }
    c
}

/// Normalized `lhs − rhs`, using the equation only when the case needs it.
pub fn residual(case: &IdentityCase, rewrite: &RewriteConfig) -> Result<Expression<Rational>, ExprError> {
    let cfg = RewriteConfig { use_pde: case.requires_pde, ..rewrite.clone() };
    normalize(&case.lhs.try_sub(&case.rhs)?, &cfg)
}

/// Like [`residual`], with `set` applied before normalizing and again after,
/// since the equation brings in `g` with symbolic `n` and `p`.
pub fn residual_with(case: &IdentityCase, rewrite: &RewriteConfig, set: &[(Var, Rational)]) -> Result<Expression<Rational>, ExprError> {
    let case = specialize_case(case, set);
    let mut r = residual(&case, rewrite)?;
    for (v, x) in set {
        r = r.specialize(*v, x);
    }
    Ok(r)
}

pub fn verify(case: &IdentityCase, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let case = specialize_case(case, &opts.set);
    let mut report = VerificationReport {
        id: case.id.clone(),
        anchor: case.anchor.clone(),
        pde_used: case.requires_pde,
        lhs_terms: case.lhs.len(),
        rhs_terms: case.rhs.len(),
        ..VerificationReport::default()
    };
    match residual_with(&case, &opts.rewrite, &opts.set) {
        Ok(r) => {
            report.passed = r.is_zero();
            report.residual_terms = r.len();
            if !r.is_zero() {
                report.residual = print(&r);
            }
        }
        Err(e) => report.error = Some(SuiteError::Expr { id: case.id.clone(), source: e }.to_string()),
    }
    if let (Some(o), None) = (&opts.oracle, &report.error) {
        match crate::oracle::oracle_check(&case, &o.n_values, o.points, o.seed, &opts.set, report.passed) {
            Ok(summary) => report.oracle = Some(summary),
            Err(e) => report.error = Some(format!("{}: oracle: {e}", case.id)),
        }
    }
    report.wall_ms = start.elapsed().as_millis();
    report
}

/// Verifies cases in parallel; reports come back sorted by id.
pub fn run_catalog(cases: &[IdentityCase], opts: &VerifyOptions) -> Vec<VerificationReport> {
    let mut out: Vec<VerificationReport> = cases.par_iter().map(|c| verify(c, opts)).collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// Shell-style match with `*` and `?` on case ids.
pub fn id_matches(pattern: &str, id: &str) -> bool {
    fn go(p: &[u8], s: &[u8]) -> bool {
        match (p.first(), s.first()) {
            (None, None) => true,
            (Some(b'*'), _) => go(&p[1..], s) || (!s.is_empty() && go(p, &s[1..])),
            (Some(b'?'), Some(_)) => go(&p[1..], &s[1..]),
            (Some(a), Some(b)) if a == b => go(&p[1..], &s[1..]),
            _ => false,
        }
    }
    go(pattern.as_bytes(), id.as_bytes())
}

fn find<'a>(cases: &'a [IdentityCase], id: &str) -> &'a IdentityCase {
    cases.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("catalog has no case {id}"))
}

/// Checks the pointwise identity behind the integral estimate with the
/// weight `e^{2(n−1)f}`, together with the real part of the equation and the
/// traced integrand identity.
pub fn verify_integrand_identities(cases: &[IdentityCase], opts: &VerifyOptions) -> Vec<VerificationReport> {
    ["eq3--17", "eq2.1", "eq3-21-pointwise"].iter().map(|id| verify(find(cases, id), opts)).collect()
}

/// `f_{αβᾱ}` against its reduction, with the equation (must vanish) and
/// without (records the residual).
pub fn third_order_identity_check(use_pde: bool) -> VerificationReport {
    let start = Instant::now();
    let id = if use_pde { "eq2.12.direct" } else { "eq2.12.direct-nopde" };
    let mut report = VerificationReport {
        id: id.into(),
        anchor: "f_{αβᾱ} = 2(n+1)G_β − nḡ_β − 2(n+1)f_β g".into(),
        pde_used: use_pde,
        ..Default::default()
    };
    match crate::cr::third_order_difference::<Rational>(&crate::cr::Definitions::standard())
        .and_then(|d| normalize(&d, &RewriteConfig::with_pde(use_pde)))
    {
        Ok(r) => {
            report.passed = r.is_zero();
            report.residual_terms = r.len();
            report.residual = if r.is_zero() { String::new() } else { print(&r) };
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report.wall_ms = start.elapsed().as_millis();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glob_matching() {
        assert!(id_matches("eq2.*", "eq2.10.s3"));
        assert!(id_matches("eq2.?", "eq2.7"));
        assert!(!id_matches("eq2.?", "eq2.10"));
        assert!(id_matches("*", ""));
    }

    #[test]
    fn small_cases_pass() {
        let cases = builtin_cases();
        for id in ["eq2.1", "eq2.3", "eq2.5", "eq2.6", "eq2.17", "eq2.4.E1"] {
            let r = verify(find(&cases, id), &VerifyOptions::default());
            assert!(r.ok(), "{id}: {}", r.residual);
        }
    }
}
