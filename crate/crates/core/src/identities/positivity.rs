//! Positivity of the coefficients left after choosing `s = s₀`.
//!
//! With `N₁ = n(2n+p)/4`, `N₂ = ((7n−6)(2n−p) − 8np)/4`, `N₃ = 4n²−2n+p`,
//! `N₄ = 3n(2n−p)` the coefficients are `cᵢ = −p·Nᵢ/(2n−p)`, and
//! `s₀ = (2n+p)/(4n)`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coeff::{CoeffPoly, Var};
use crate::scalar::rat;
use crate::Rational;

/// Exact `s₀, c₁..c₄` at one point. `None` when `2n = p`.
pub fn sos_coefficients(n: &Rational, p: &Rational) -> Option<(Rational, [Rational; 4])> {
    let two = rat(2, 1);
    let den = &two * n - p;
    if den.is_zero() {
        return None;
    }
    let s0 = (&two * n + p) / (rat(4, 1) * n);
    let c1 = -p * n * (&two * n + p) / (rat(4, 1) * &den);
    let c2 = -(p / rat(4, 1)) * (rat(7, 1) * n - rat(6, 1) - rat(8, 1) * n * p / &den);
    let c3 = -p * (rat(4, 1) * n * n - &two * n + p) / &den;
    let c4 = -rat(3, 1) * n * p;
    Some((s0, [c1, c2, c3, c4]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityFailure {
    pub n: u32,
    pub p: String,
    pub coefficient: String,
    pub value: String,
}

/// One affine-in-`p` numerator shown positive on `n ≥ 1, −2 < p < 0`: its
/// values at `p = 0` and `p = −2`, written in `m = n − 1`, have nonnegative
/// coefficients and do not vanish together.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateLine {
    pub name: String,
    pub numerator: String,
    pub at_p0: String,
    pub at_p_minus2: String,
    pub holds: bool,
    /// Vanishes at `p = −2` for some `n ≥ 1`: positivity needs `p > −2`.
    pub needs_open_interval: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub n_max: u32,
    pub samples: u32,
    pub grid_points: usize,
    pub failures: Vec<PositivityFailure>,
    pub certificate: Vec<CertificateLine>,
    /// Named exact evaluations, e.g. `n=1 p=-1 s0` → `1/4`.
    pub probes: Vec<(String, String)>,
    /// `c₃` at `n = 1` as `p → −2⁺`: strictly positive and decreasing to 0.
    pub c3_boundary: Vec<(String, String)>,
    pub c3_boundary_ok: bool,
    pub passed: bool,
}

type P = CoeffPoly<Rational>;

fn n() -> P {
    P::var(Var::N)
}
fn p() -> P {
    P::var(Var::P)
}
fn k(v: i64) -> P {
    P::from_i64(v)
}

fn numerators() -> Vec<(&'static str, P)> {
    let quarter = P::real(rat(1, 4));
    let two_n_plus_p = k(2) * n() + p();
    let two_n_minus_p = k(2) * n() - p();
    vec![
        ("c1", n() * two_n_plus_p.clone() * quarter.clone()),
        ("c2", ((k(7) * n() - k(6)) * two_n_minus_p.clone() - k(8) * n() * p()) * quarter),
        ("c3", k(4) * n() * n() - k(2) * n() + p()),
        ("c4", k(3) * n() * two_n_minus_p.clone()),
        ("s0 numerator 2n+p", two_n_plus_p),
        ("1-s0 numerator 2n-p", two_n_minus_p),
    ]
}

/// `q(n)` rewritten in `m = n − 1` (reusing the `n` slot).
fn shift_n(q: &P) -> P {
    let mut out = P::zero();
    for (d, c) in q.terms() {
        let mono = P::monomial([0, d[1], d[2]], c.clone());
        out = out + mono * (n() + k(1)).pow(u32::from(d[0]));
    }
    out
}

fn nonneg(q: &P) -> bool {
    q.terms().all(|(_, c)| c.im.is_zero() && !c.re.is_negative())
}

fn certificate() -> Vec<CertificateLine> {
    numerators()
        .into_iter()
        .map(|(name, num)| {
            let at0 = shift_n(&num.substitute(Var::P, &Rational::zero()));
            let at2 = shift_n(&num.substitute(Var::P, &rat(-2, 1)));
            let both = &at0 + &at2;
            let positive_const = both.terms().any(|(d, c)| *d == [0, 0, 0] && c.re.is_positive());
            let holds = num.degree(Var::P) <= 1 && num.degree(Var::S) == 0 && nonneg(&at0) && nonneg(&at2) && positive_const;
            let at2_const = at2.terms().find(|(d, _)| **d == [0, 0, 0]).map(|(_, c)| c.re.clone()).unwrap_or_default();
            CertificateLine {
                name: name.to_string(),
                numerator: num.to_string(),
                at_p0: at0.to_string().replace('n', "m"),
                at_p_minus2: at2.to_string().replace('n', "m"),
                holds,
                needs_open_interval: at2_const.is_zero(),
            }
        })
        .collect()
}

/// Exact grid check on `n ∈ 1..=n_max`, `p = −2k/(samples+1)`, plus the
/// symbolic certificate and boundary probes.
pub fn check_positivity(n_max: u32, samples: u32) -> PositivityReport {
    assert!(n_max >= 1 && samples >= 2, "need n_max ≥ 1 and samples ≥ 2");
    let names = ["c1", "c2", "c3", "c4"];
    let mut failures = Vec::new();
    let mut grid_points = 0;
    for nv in 1..=n_max {
        let nr = rat(i64::from(nv), 1);
        for kk in 1..=samples {
            let pr = rat(-2 * i64::from(kk), i64::from(samples) + 1);
            grid_points += 1;
            let (s0, cs) = sos_coefficients(&nr, &pr).expect("2n > p on the grid");
            if !(s0.is_positive() && s0 < Rational::one()) {
                failures.push(PositivityFailure { n: nv, p: pr.to_string(), coefficient: "s0".into(), value: s0.to_string() });
            }
            for (name, c) in names.iter().zip(cs.iter()) {
                if !c.is_positive() {
                    failures.push(PositivityFailure { n: nv, p: pr.to_string(), coefficient: name.to_string(), value: c.to_string() });
                }
            }
        }
    }

    let mut probes = Vec::new();
    let mut probe = |nv: i64, pr: Rational| {
        let (s0, cs) = sos_coefficients(&rat(nv, 1), &pr).expect("probe in domain");
        probes.push((format!("n={nv} p={pr} s0"), s0.to_string()));
        for (name, c) in names.iter().zip(cs.iter()) {
            probes.push((format!("n={nv} p={pr} {name}"), c.to_string()));
        }
    };
    probe(1, rat(-1, 1));
    probe(2, rat(-1, 1000));

    let mut c3_boundary = Vec::new();
    let mut prev: Option<Rational> = None;
    let mut c3_boundary_ok = true;
    for e in 1..=8u32 {
        let eps = Rational::new(1.into(), num_bigint::BigInt::from(10).pow(e));
        let pr = rat(-2, 1) + eps;
        let (_, cs) = sos_coefficients(&rat(1, 1), &pr).expect("in domain");
        let c3 = cs[2].clone();
        c3_boundary_ok &= c3.is_positive() && prev.as_ref().is_none_or(|q| c3 < *q);
        c3_boundary.push((pr.to_string(), c3.to_string()));
        prev = Some(c3);
    }
    let (_, at_edge) = sos_coefficients(&rat(1, 1), &rat(-2, 1)).expect("2n > p");
    c3_boundary_ok &= at_edge[2].is_zero();
    c3_boundary.push(("-2".into(), at_edge[2].to_string()));

    let certificate = certificate();
    let passed = failures.is_empty() && certificate.iter().all(|c| c.holds) && c3_boundary_ok;
    PositivityReport { n_max, samples, grid_points, failures, certificate, probes, c3_boundary, c3_boundary_ok, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_probe() {
        let (s0, c) = sos_coefficients(&rat(1, 1), &rat(-1, 1)).unwrap();
        assert_eq!(s0, rat(1, 4));
        assert_eq!(c[3], rat(3, 1));
    }

    #[test]
    fn small_grid_and_certificate() {
        let r = check_positivity(5, 9);
        assert!(r.passed, "{:?}", r.failures);
        let c3 = r.certificate.iter().find(|c| c.name == "c3").unwrap();
        assert!(c3.needs_open_interval);
        assert!(r.certificate.iter().filter(|c| c.needs_open_interval).count() >= 1);
    }

    #[test]
    fn s0_hits_zero_on_the_excluded_boundary() {
        let (s0, _) = sos_coefficients(&rat(1, 1), &rat(-2, 1)).unwrap();
        assert!(s0.is_zero());
    }
}
