//! The explicit solution `u = C|t + i z·z̄ + z·μ + λ|^{−n}` of the critical
//! Yamabe equation `−Δu = 2n² u^{q*}` on `ℍⁿ`, `q* = (n+2)/n`.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gaussian::Gaussian;
use crate::Rational;

use super::heisenberg::{z_apply_f64, HPointF64, HPoly, HeisenbergError};
use super::jets::{Complex, Slot};

pub const RELATIVE_TOLERANCE: f64 = 1e-10;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum YamabeError {
    #[error("inadmissible parameters: need Im(λ) > |μ|²/4, got Im(λ) = {im}, |μ|²/4 = {bound}")]
    Inadmissible { im: String, bound: String },
    #[error("C must be positive")]
    NonPositiveC,
    #[error("n must be 1 or 2, got {0}")]
    Dimension(usize),
    #[error("need at least 10 sample points, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
}

/// `C > 0`, `λ`, `μ ∈ ℂⁿ` with `Im λ > |μ|²/4`.
#[derive(Clone, Debug, PartialEq)]
pub struct YamabeParams {
    pub c: f64,
    pub lambda: Complex,
    pub mu: Vec<Complex>,
}

impl YamabeParams {
    pub fn new(c: f64, lambda: Complex, mu: Vec<Complex>) -> Result<Self, YamabeError> {
        if c.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(YamabeError::NonPositiveC);
        }
        let bound = mu.iter().fold(Rational::zero(), |acc, m| acc + m.norm_sqr()) / Rational::from_integer(4.into());
        if lambda.im <= bound {
            return Err(YamabeError::Inadmissible { im: lambda.im.to_string(), bound: bound.to_string() });
        }
        Ok(Self { c, lambda, mu })
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// The kernel `|w|^{−n}` (that is, `u` with `C = 1`).
    pub fn kernel(&self) -> HPoly {
        HPoly::yamabe_kernel(self.lambda.clone(), self.mu.clone())
    }
}

pub fn yamabe_u(params: &YamabeParams, pt: &HPointF64) -> Result<f64, YamabeError> {
    Ok(params.c * z_apply_f64(&params.kernel(), &[], pt)?.re)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YamabeReport {
    pub n: usize,
    pub samples: usize,
    pub c: f64,
    /// `−Δu/u^{q*}` for the given `C`, averaged over the samples.
    pub ratio: f64,
    /// Largest relative deviation of the ratio from its first sample.
    pub spread: f64,
    /// Largest `|Im ratio| / |ratio|`.
    pub imaginary: f64,
    pub constant: bool,
    /// The `C` making the ratio `2n²`.
    pub solved_c: Option<f64>,
    pub target: f64,
    /// Relative error of the ratio recomputed with `solved_c`.
    pub solved_error: f64,
    /// Largest relative residual of the real part of the transformed
    /// equation at `p = 0`, with `e^f = u^{1/n}` and `C = solved_c`.
    pub transform_residual: f64,
    /// The two most discrepant sample points when the ratio is not constant.
    pub discrepant: Option<[String; 2]>,
    pub passed: bool,
}

struct Sample {
    u: f64,
    lap: Gaussian<f64>,
    grad: Vec<Gaussian<f64>>,
    hess_trace: Gaussian<f64>,
}

fn sample(k: &HPoly, n: usize, pt: &HPointF64) -> Result<Sample, HeisenbergError> {
    let u = z_apply_f64(k, &[], pt)?.re;
    let mut lap = Gaussian::zero();
    let mut hess_trace = Gaussian::zero();
    let mut grad = Vec::new();
    for a in 1..=n as u8 {
        let (h, b) = (Slot::Hol(a), Slot::Anti(a));
        let uab = z_apply_f64(k, &[h, b], pt)?;
        lap += uab.clone() + z_apply_f64(k, &[b, h], pt)?;
        hess_trace += uab;
        grad.push(z_apply_f64(k, &[h], pt)?);
    }
    Ok(Sample { u, lap, grad, hess_trace })
}

fn describe(pt: &HPointF64) -> String {
    let z: Vec<String> = pt.z.iter().map(|c| format!("{:.6}{:+.6}i", c.re, c.im)).collect();
    format!("z=({}), t={:.6}", z.join(", "), pt.t)
}

/// Samples `−Δu/u^{q*}` at random points, checks it is constant, solves for
/// the `C` giving `2n²`, and checks the transformed equation at that `C`.
pub fn check_yamabe_solves(params: &YamabeParams, samples: usize, seed: u64) -> Result<YamabeReport, YamabeError> {
    let n = params.n();
    if !(1..=2).contains(&n) {
        return Err(YamabeError::Dimension(n));
    }
    if samples < 10 {
        return Err(YamabeError::TooFewSamples(samples));
    }
    let nf = n as f64;
    let q = (nf + 2.0) / nf;
    let kernel = params.kernel();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<HPointF64> = (0..samples).map(|_| HPointF64::random(n, &mut rng)).collect();
    let data = points.iter().map(|pt| sample(&kernel, n, pt)).collect::<Result<Vec<_>, _>>()?;

    // ratio for C = 1; C scales it by C^{1−q*}
    let ratios: Vec<Gaussian<f64>> = data.iter().map(|s| (-s.lap.clone()).scale(&s.u.powf(-q))).collect();
    let r0 = ratios[0].re;
    let mut spread: f64 = 0.0;
    let mut imaginary: f64 = 0.0;
    let (mut lo, mut hi) = (0, 0);
    for (k, r) in ratios.iter().enumerate() {
        spread = spread.max((r.re - r0).abs() / r0.abs());
        imaginary = imaginary.max(r.im.abs() / r.re.abs());
        if r.re < ratios[lo].re {
            lo = k;
        }
        if r.re > ratios[hi].re {
            hi = k;
        }
    }
    let mean = ratios.iter().map(|r| r.re).sum::<f64>() / samples as f64;
    let constant = spread <= RELATIVE_TOLERANCE && imaginary <= RELATIVE_TOLERANCE;
    let target = 2.0 * nf * nf;
    let solved_c = (constant && mean > 0.0).then(|| (mean / target).powf(nf / 2.0));

    let (mut solved_error, mut transform_residual) = (f64::INFINITY, f64::INFINITY);
    if let Some(c) = solved_c {
        solved_error = 0.0;
        transform_residual = 0.0;
        for s in &data {
            // u = c·kernel: Δu scales by c, u^{q*} by c^{q*}
            let u = c * s.u;
            let r = -(s.lap.re * c) / u.powf(q);
            solved_error = solved_error.max((r - target).abs() / target);
            // f = ln(u)/n: f_α = u_α/(nu), f_{αᾱ} = u_{αᾱ}/(nu) − u_α u_ᾱ/(nu²)
            let grad2: f64 = s.grad.iter().map(|g| g.norm_sqr()).sum::<f64>() * c * c;
            let df2 = grad2 / (nf * u).powi(2);
            let trace = s.hess_trace.re * c / (nf * u) - grad2 / (nf * u * u);
            let e2f = u.powf(2.0 / nf);
            let scale = trace.abs() + nf * df2 + nf * e2f;
            transform_residual = transform_residual.max((trace + nf * df2 + nf * e2f).abs() / scale);
        }
    }
    let passed = constant && solved_error <= RELATIVE_TOLERANCE && transform_residual <= RELATIVE_TOLERANCE;
    Ok(YamabeReport {
        n,
        samples,
        c: params.c,
        ratio: mean * params.c.powf(1.0 - q),
        spread,
        imaginary,
        constant,
        solved_c,
        target,
        solved_error,
        transform_residual,
        discrepant: (!constant).then(|| [describe(&points[lo]), describe(&points[hi])]),
        passed,
    })
}

/// Residual of the real part of the transformed equation at `p = 0` at one
/// point, for `u` given by `params` (not rescaled).
pub fn yamabe_u_to_f_residual(params: &YamabeParams, pt: &HPointF64) -> Result<f64, YamabeError> {
    let n = params.n();
    let nf = n as f64;
    let s = sample(&params.kernel(), n, pt)?;
    let c = params.c;
    let u = c * s.u;
    let grad2: f64 = s.grad.iter().map(|g| g.norm_sqr()).sum::<f64>() * c * c;
    let trace = s.hess_trace.re * c / (nf * u) - grad2 / (nf * u * u);
    Ok(trace + nf * grad2 / (nf * u).powi(2) + nf * u.powf(2.0 / nf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn unit_value_at_origin() {
        let p = YamabeParams::new(1.0, Complex::i(), vec![Complex::zero()]).unwrap();
        let pt = HPointF64 { z: vec![Gaussian::zero()], t: 0.0 };
        assert!((yamabe_u(&p, &pt).unwrap() - 1.0).abs() < 1e-15);
        let p2 = YamabeParams { c: 2.0, ..p };
        assert!((yamabe_u(&p2, &pt).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn admissibility() {
        let mu = vec![Complex::new(rat(2, 1), rat(0, 1))];
        assert!(YamabeParams::new(1.0, Complex::i(), mu.clone()).is_err());
        assert!(YamabeParams::new(1.0, Complex::new(rat(0, 1), rat(11, 10)), mu).is_ok());
        assert!(YamabeParams::new(0.0, Complex::i(), vec![Complex::zero()]).is_err());
    }

    #[test]
    fn ratio_is_constant_for_n1() {
        let p = YamabeParams::new(1.0, Complex::i(), vec![Complex::zero()]).unwrap();
        let r = check_yamabe_solves(&p, 50, 1).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
