//! The vector fields applied to explicit functions on the Heisenberg group.

use crjet_core::oracle::{
    check_yamabe_solves, yamabe_u, yamabe_u_to_f_residual, z_apply, z_apply_f64, Complex, HPoint, HPointF64, HPoly, Poly, Slot,
    YamabeParams,
};
use crjet_core::scalar::rat;
use crjet_core::Gaussian;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn slots(n: u8) -> Vec<Slot> {
    let mut v: Vec<Slot> = (1..=n).flat_map(|k| [Slot::Hol(k), Slot::Anti(k)]).collect();
    v.push(Slot::T);
    v
}

fn two_i() -> Complex {
    Complex::new(rat(0, 1), rat(2, 1))
}

/// `f_{u x y v} − f_{u y x v}` predicted by the commutation rules.
fn swap_defect(x: Slot, y: Slot) -> Option<Complex> {
    match (x, y) {
        (Slot::Hol(a), Slot::Anti(b)) if a == b => Some(two_i()),
        (Slot::Anti(a), Slot::Hol(b)) if a == b => Some(-two_i()),
        _ => None,
    }
}

/// Every adjacent transposition in every word of length `len` changes the
/// value by exactly the commutator term.
fn check_all_swaps(n: u8, len: usize, mut value: impl FnMut(&[Slot]) -> Gaussian<f64>, tol: f64) {
    let alphabet = slots(n);
    let total = alphabet.len().pow(len as u32);
    for code in 0..total {
        let mut c = code;
        let w: Vec<Slot> = (0..len)
            .map(|_| {
                let s = alphabet[c % alphabet.len()];
                c /= alphabet.len();
                s
            })
            .collect();
        for k in 0..len - 1 {
            let mut sw = w.clone();
            sw.swap(k, k + 1);
            let lhs = value(&w) - value(&sw);
            let rhs = match swap_defect(w[k], w[k + 1]) {
                Some(c) => {
                    let mut shorter: Vec<Slot> = w[..k].to_vec();
                    shorter.extend_from_slice(&w[k + 2..]);
                    shorter.push(Slot::T);
                    value(&shorter) * c.map(crjet_core::Scalar::as_f64)
                }
                None => Gaussian::zero(),
            };
            let d = lhs - rhs.clone();
            let scale = 1.0 + rhs.norm_sqr().sqrt();
            assert!(d.norm_sqr().sqrt() <= tol * scale, "n={n} word {w:?} swap {k}: defect {d:?}");
        }
    }
}

#[test]
fn commutators_hold_for_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in [1usize, 2] {
        for _ in 0..20 {
            let f = HPoly::polynomial(Poly::random(n, 5, 8, &mut rng));
            let pt = HPoint::random(n, &mut rng);
            for a in 1..=n as u8 {
                for b in 1..=n as u8 {
                    let (h, bb) = (Slot::Hol(a), Slot::Anti(b));
                    let d = z_apply(&f, &[h, bb], &pt).unwrap() - z_apply(&f, &[bb, h], &pt).unwrap();
                    let want = if a == b { two_i() * z_apply(&f, &[Slot::T], &pt).unwrap() } else { Complex::zero() };
                    assert_eq!(d, want);
                    let hb = Slot::Hol(b);
                    assert_eq!(z_apply(&f, &[h, hb], &pt).unwrap(), z_apply(&f, &[hb, h], &pt).unwrap());
                    assert_eq!(z_apply(&f, &[Slot::T, h], &pt).unwrap(), z_apply(&f, &[h, Slot::T], &pt).unwrap());
                    // third order: f_{αβγ̄} − f_{αγ̄β} = 2i δ_{βγ} f_{α0}
                    for c in 1..=n as u8 {
                        let g = Slot::Anti(c);
                        let d = z_apply(&f, &[h, hb, g], &pt).unwrap() - z_apply(&f, &[h, g, hb], &pt).unwrap();
                        let want = if b == c { two_i() * z_apply(&f, &[h, Slot::T], &pt).unwrap() } else { Complex::zero() };
                        assert_eq!(d, want);
                    }
                }
            }
        }
    }
}

#[test]
fn polynomial_words_of_length_four_commute_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [1u8, 2] {
        let f = HPoly::polynomial(Poly::random(n.into(), 6, 10, &mut rng));
        let pt = HPoint::random(n.into(), &mut rng);
        check_all_swaps(n, 4, |w| z_apply(&f, w, &pt).unwrap().map(crjet_core::Scalar::as_f64), 1e-9);
    }
}

#[test]
fn yamabe_kernel_fourth_derivatives_commute() {
    // n = 2: integral powers of w, exact arithmetic
    let k2 = HPoly::yamabe_kernel(Complex::new(rat(1, 2), rat(3, 1)), vec![Complex::new(rat(1, 1), rat(-1, 2)), Complex::i()]);
    let pt = HPoint { z: vec![Complex::new(rat(1, 3), rat(1, 2)), Complex::new(rat(-1, 1), rat(2, 5))], t: rat(-2, 7) };
    let mut exact = std::collections::HashMap::new();
    check_all_swaps(
        2,
        4,
        |w| exact.entry(w.to_vec()).or_insert_with(|| z_apply(&k2, w, &pt).unwrap()).map(crjet_core::Scalar::as_f64),
        1e-9,
    );
    // n = 1: |w|^{−1}, floating
    let k1 = HPoly::yamabe_kernel(Complex::new(rat(0, 1), rat(2, 1)), vec![Complex::new(rat(1, 2), rat(1, 2))]);
    let ptf = HPointF64 { z: vec![Gaussian::new(0.3, -0.7)], t: 0.45 };
    check_all_swaps(1, 4, |w| z_apply_f64(&k1, w, &ptf).unwrap(), 1e-10);
}

fn admissible(n: usize) -> Vec<YamabeParams> {
    let mu = |v: Vec<(i64, i64)>| v.into_iter().map(|(a, b)| Complex::new(rat(a, 2), rat(b, 2))).collect::<Vec<_>>();
    let mk = |im: (i64, i64), re: (i64, i64), m: Vec<Complex>| {
        YamabeParams::new(1.0, Complex::new(rat(re.0, re.1), rat(im.0, im.1)), m).unwrap()
    };
    match n {
        1 => vec![mk((1, 1), (0, 1), mu(vec![(0, 0)])), mk((2, 1), (1, 3), mu(vec![(1, 1)])), mk((3, 2), (-1, 1), mu(vec![(2, -1)]))],
        _ => vec![
            mk((1, 1), (0, 1), mu(vec![(0, 0), (0, 0)])),
            mk((5, 2), (1, 2), mu(vec![(1, 0), (0, 1)])),
            mk((4, 1), (-2, 1), mu(vec![(2, 1), (-1, 3)])),
        ],
    }
}

#[test]
fn yamabe_ratio_is_constant_and_solvable() {
    for n in [1, 2] {
        for (k, p) in admissible(n).into_iter().enumerate() {
            let r = check_yamabe_solves(&p, 50, 100 + k as u64).unwrap();
            println!(
                "n={n} λ={} ratio={:.12} spread={:.1e} C={:.12} transform={:.1e}",
                p.lambda,
                r.ratio,
                r.spread,
                r.solved_c.unwrap_or(f64::NAN),
                r.transform_residual
            );
            assert!(r.passed, "{r:?}");
        }
    }
}

#[test]
fn inadmissible_parameters_rejected() {
    let mu = vec![Complex::new(rat(2, 1), rat(0, 1))];
    assert!(YamabeParams::new(1.0, Complex::i(), mu.clone()).is_err());
    assert!(YamabeParams::new(1.0, Complex::new(rat(0, 1), rat(-1, 1)), vec![Complex::zero()]).is_err());
    // equality is excluded too
    assert!(YamabeParams::new(1.0, Complex::i(), mu).is_err());
}

#[test]
fn u_is_positive_and_finite() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for n in [1, 2] {
        for p in admissible(n) {
            for _ in 0..1000 {
                let mut pt = HPointF64::random(n, &mut rng);
                pt.t *= rng.gen_range(0.1..50.0);
                let u = yamabe_u(&p, &pt).unwrap();
                assert!(u.is_finite() && u > 0.0);
                let doubled = YamabeParams { c: 2.0 * p.c, ..p.clone() };
                assert!((yamabe_u(&doubled, &pt).unwrap() - 2.0 * u).abs() <= 1e-12 * u);
            }
        }
    }
}

#[test]
fn transform_residual_needs_the_right_constant() {
    let p = admissible(1).remove(0);
    let r = check_yamabe_solves(&p, 20, 9).unwrap();
    let c = r.solved_c.unwrap();
    let pt = HPointF64 { z: vec![Gaussian::new(0.2, 0.1)], t: -0.3 };
    let good = YamabeParams { c, ..p.clone() };
    let bad = YamabeParams { c: 2.0 * c, ..p };
    assert!(yamabe_u_to_f_residual(&good, &pt).unwrap().abs() < 1e-10);
    assert!(yamabe_u_to_f_residual(&bad, &pt).unwrap().abs() > 1e-3);
}
