//! Seeded random expressions, built as source text so the parser is exercised too.

#![allow(dead_code)]

pub mod deps;

use crjet_core::parser::{parse_expression, ParseOptions};
use crjet_core::Expr;
use rand::seq::SliceRandom;
use rand::Rng;

const DUMMY_LETTERS: [char; 4] = ['a', 'b', 'c', 'd'];

/// Shape of a random expression: which free letters each monomial carries.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    /// Free holomorphic index `k` in every monomial.
    pub free_hol: bool,
    pub max_terms: usize,
    pub max_dummies: usize,
    pub max_factors: usize,
    pub max_t: usize,
}

impl Shape {
    pub const SCALAR: Shape = Shape { free_hol: false, max_terms: 3, max_dummies: 2, max_factors: 3, max_t: 1 };
    pub const VECTOR: Shape = Shape { free_hol: true, max_terms: 3, max_dummies: 2, max_factors: 3, max_t: 1 };
}

fn coefficient(rng: &mut impl Rng) -> String {
    let re = rng.gen_range(-4i32..=4);
    let im = rng.gen_range(-3i32..=3);
    let den = rng.gen_range(1u32..=3);
    let mut c = match (re, im) {
        (0, 0) => "1".to_string(),
        (r, 0) => format!("{r}/{den}"),
        (0, i) => format!("{i}/{den}*I"),
        (r, i) => format!("({r} + {i}*I)/{den}"),
    };
    match rng.gen_range(0..6) {
        0 => c.push_str("*n"),
        1 => c.push_str("*(p + 2)"),
        2 => c.push_str("*s"),
        _ => {}
    }
    c
}

fn exponential(rng: &mut impl Rng) -> Option<&'static str> {
    match rng.gen_range(0..6) {
        0 => Some("exp((2+p)*f)"),
        1 => Some("exp(2*f)"),
        2 => Some("exp(-n*f)"),
        _ => None,
    }
}

/// One monomial as text: factors `f[...]` whose words are in application
/// order, so unsorted words appear and the normalizer has work to do.
pub fn monomial_text(rng: &mut impl Rng, shape: &Shape) -> String {
    let factors = rng.gen_range(1..=shape.max_factors);
    let mut words: Vec<Vec<String>> = vec![Vec::new(); factors];
    let place = |rng: &mut _, idx: String, words: &mut Vec<Vec<String>>| {
        let k = Rng::gen_range(rng, 0..words.len());
        let w = &mut words[k];
        let at = Rng::gen_range(rng, 0..=w.len());
        w.insert(at, idx);
    };
    let dummies = rng.gen_range(0..=shape.max_dummies);
    for &d in DUMMY_LETTERS.iter().take(dummies) {
        place(rng, d.to_string(), &mut words);
        place(rng, format!("{d}'"), &mut words);
    }
    if shape.free_hol {
        place(rng, "k".into(), &mut words);
    }
    for _ in 0..rng.gen_range(0..=shape.max_t) {
        place(rng, "0".into(), &mut words);
    }
    let mut parts = vec![coefficient(rng)];
    if let Some(e) = exponential(rng) {
        parts.push(e.into());
    }
    parts.extend(words.iter().filter(|w| !w.is_empty()).map(|w| format!("f[{}]", w.join(","))));
    parts.join("*")
}

pub fn expr_text(rng: &mut impl Rng, shape: &Shape) -> String {
    let terms = rng.gen_range(1..=shape.max_terms);
    (0..terms).map(|_| monomial_text(rng, shape)).collect::<Vec<_>>().join(" + ")
}

pub fn parse(src: &str) -> Expr {
    parse_expression(src, &ParseOptions::default()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn random_expr(rng: &mut impl Rng, shape: &Shape) -> Expr {
    parse(&expr_text(rng, shape))
}

/// A monomial with sorted words over dummy letters only, as a list of
/// `(holomorphic letters, antiholomorphic letters, t count)` per factor.
pub type SortedMonomial = Vec<(Vec<char>, Vec<char>, usize)>;

pub fn random_sorted_monomial(rng: &mut impl Rng, dummies: usize) -> SortedMonomial {
    let factors = rng.gen_range(1..=3);
    let mut m: SortedMonomial = vec![(Vec::new(), Vec::new(), 0); factors];
    for &d in DUMMY_LETTERS.iter().take(dummies) {
        m[rng.gen_range(0..factors)].0.push(d);
        m[rng.gen_range(0..factors)].1.push(d);
    }
    for _ in 0..rng.gen_range(0..=1) {
        m[rng.gen_range(0..factors)].2 += 1;
    }
    m
}

pub fn sorted_monomial_text(m: &SortedMonomial) -> String {
    let mut parts = vec!["1".to_string()];
    for (h, a, t) in m {
        let mut w: Vec<String> = h.iter().map(|c| c.to_string()).collect();
        w.extend(a.iter().map(|c| format!("{c}'")));
        w.extend(std::iter::repeat_n("0".to_string(), *t));
        if !w.is_empty() {
            parts.push(format!("f[{}]", w.join(",")));
        }
    }
    parts.join("*")
}

/// Renames dummy letters by a random permutation and shuffles factor order.
pub fn relabel(rng: &mut impl Rng, m: &SortedMonomial) -> SortedMonomial {
    let mut letters = DUMMY_LETTERS.to_vec();
    letters.shuffle(rng);
    let map = |c: char| letters[DUMMY_LETTERS.iter().position(|&d| d == c).unwrap()];
    let mut out: SortedMonomial =
        m.iter().map(|(h, a, t)| (h.iter().map(|&c| map(c)).collect(), a.iter().map(|&c| map(c)).collect(), *t)).collect();
    out.shuffle(rng);
    out
}

/// Equality of sorted monomials up to renaming dummies, by trying every
/// permutation of the dummy letters.
pub fn brute_force_equal(x: &SortedMonomial, y: &SortedMonomial) -> bool {
    fn key(m: &SortedMonomial, map: &dyn Fn(char) -> char) -> Vec<(Vec<char>, Vec<char>, usize)> {
        let mut out: Vec<_> = m
            .iter()
            .filter(|(h, a, t)| !(h.is_empty() && a.is_empty() && *t == 0))
            .map(|(h, a, t)| {
                let mut h: Vec<char> = h.iter().map(|&c| map(c)).collect();
                let mut a: Vec<char> = a.iter().map(|&c| map(c)).collect();
                h.sort();
                a.sort();
                (h, a, *t)
            })
            .collect();
        out.sort();
        out
    }
    let target = key(y, &|c| c);
    permutations(&DUMMY_LETTERS).iter().any(|perm| key(x, &|c| perm[DUMMY_LETTERS.iter().position(|&d| d == c).unwrap()]) == target)
}

fn permutations(items: &[char]) -> Vec<Vec<char>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}
