//! Concrete-dimension cross-checks: identities evaluated at exact jet points,
//! the vector fields applied to explicit functions on `ℍⁿ`, and the explicit
//! Yamabe solution.

mod heisenberg;
mod jets;
mod yamabe;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::Var;
use crate::identities::{IdentityCase, OracleSummary};
use crate::Rational;

pub use heisenberg::{z_apply, z_apply_f64, HPoint, HPointF64, HPoly, HeisenbergError, Poly};
pub use jets::{
    components, evaluate, evaluate_assigned, evaluate_components, exp_denominator, free_labels, random_p, random_rho, random_s, word_name,
    CWord, Complex, JetPoint, OracleError, OracleResult, Slot,
};
pub use yamabe::{check_yamabe_solves, yamabe_u, yamabe_u_to_f_residual, YamabeError, YamabeParams, YamabeReport};

/// Evaluates `lhs − rhs` of `case` at `points` random jet points for each
/// dimension. Values fixed in `set` are used as given; free `p` and `s` are
/// drawn per point. `symbolic` is the symbolic verdict to compare against.
pub fn oracle_check(
    case: &IdentityCase,
    n_values: &[u8],
    points: usize,
    seed: u64,
    set: &[(Var, Rational)],
    symbolic: bool,
) -> OracleResult<OracleSummary> {
    let fixed = |v: Var| set.iter().find(|(w, _)| *w == v).map(|(_, x)| x.clone());
    let mut nonzero = 0;
    let mut dims = n_values.to_vec();
    if let Some(n) = fixed(Var::N) {
        dims = vec![n.to_integer().try_into().map_err(|_| OracleError::BadDimension)?];
    }
    let case_hash = case.id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
    // the sides may differ in which free labels survive
    let mut labels = free_labels(&case.lhs);
    labels.extend(free_labels(&case.rhs));
    labels.sort();
    labels.dedup();
    for &n in &dims {
        for k in 0..points {
            let point_seed = seed ^ case_hash ^ (u64::from(n) << 56) ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            let mut rng = ChaCha8Rng::seed_from_u64(point_seed);
            let p = fixed(Var::P).unwrap_or_else(|| random_p(&mut rng));
            let s = fixed(Var::S).unwrap_or_else(|| random_s(&mut rng));
            let rho = random_rho(&mut rng);
            let m = exp_denominator([&case.lhs, &case.rhs], n, &p);
            let pt = JetPoint::random(n, p.clone(), s, rho, m, point_seed)?;
            let l = all_components(&case.lhs, &labels, n, &pt)?;
            let r = all_components(&case.rhs, &labels, n, &pt)?;
            if l != r {
                nonzero += 1;
            }
        }
    }
    Ok(OracleSummary { n_values: dims.iter().map(|&n| u32::from(n)).collect(), points, nonzero, agrees: (nonzero == 0) == symbolic })
}

fn all_components(e: &crate::Expr, labels: &[crate::Label], n: u8, pt: &JetPoint) -> OracleResult<Vec<Complex>> {
    components(labels, n).iter().map(|a| evaluate_assigned(e, a, pt)).collect()
}
