//! Lexer, syntax tree and evaluation of the expression grammar.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::coeff::{CoeffPoly, Var};
use crate::cr::{Definitions, TensorName};
use crate::expr::{gaussian, ExpFactor, ExprError, Expression};
use crate::gaussian::Gaussian;
use crate::index::{free_id, Index, Label, SCRATCH_BASE};
use crate::scalar::Scalar;

const MAX_DEPTH: usize = 200;
const MAX_POWER: u32 = 64;

#[derive(Error, Clone, Debug, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub fn start() -> Pos {
        Pos { line: 1, col: 1 }
    }

    fn err(self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, message: message.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept `D`, `E`, `G`, `g` and `df2` and expand them into jets.
    pub expand_named: bool,
    pub defs: Definitions,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self { expand_named: true, defs: Definitions::standard() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Macro(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "'{n}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Macro(s) => write!(f, "'${s}'"),
            Tok::Sym(s) => write!(f, "'{s}'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str, start: Pos) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut pos = start;
    let mut k = 0;
    let advance = |pos: &mut Pos, c: char| {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    };
    while k < chars.len() {
        let c = chars[k];
        let here = pos;
        if c.is_whitespace() {
            advance(&mut pos, c);
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let s: String = chars[k..].iter().take_while(|c| c.is_ascii_digit()).collect();
            k += s.len();
            pos.col += s.len();
            out.push((Tok::Num(s.parse().expect("digits")), here));
            continue;
        }
        let ident_at = |k: usize| -> String { chars[k..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '_').collect() };
        if c.is_ascii_alphabetic() {
            let s = ident_at(k);
            k += s.len();
            pos.col += s.len();
            out.push((Tok::Ident(s), here));
            continue;
        }
        if c == '$' {
            let s = ident_at(k + 1);
            if s.is_empty() {
                return Err(here.err("expected a macro name after '$'"));
            }
            k += s.len() + 1;
            pos.col += s.len() + 1;
            out.push((Tok::Macro(s), here));
            continue;
        }
        if c == '=' && chars.get(k + 1) == Some(&'=') {
            k += 2;
            pos.col += 2;
            out.push((Tok::Sym("=="), here));
            continue;
        }
        let sym = match c {
            '+' => "+",
            '-' => "-",
            '*' => "*",
            '/' => "/",
            '^' => "^",
            '(' => "(",
            ')' => ")",
            '[' => "[",
            ']' => "]",
            ',' => ",",
            '\'' => "'",
            _ => return Err(here.err(format!("unexpected character '{c}'"))),
        };
        k += 1;
        pos.col += 1;
        out.push((Tok::Sym(sym), here));
    }
    out.push((Tok::Eof, pos));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Node {
    Num(BigInt),
    Imag,
    Var(Var),
    BareF,
    Jet(Vec<Index>),
    Named(TensorName, Vec<Index>),
    Macro(String),
    Exp(Box<Ast>),
    Conj(Box<Ast>),
    Re(Box<Ast>),
    Abs2(Box<Ast>),
    Z(Index, Box<Ast>),
    Delta(Index, Index),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

#[derive(Clone, Debug)]
struct Ast {
    node: Node,
    pos: Pos,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    k: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.k].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.k].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.k].clone();
        if self.k + 1 < self.toks.len() {
            self.k += 1;
        }
        t
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(x) if *x == s) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.pos().err(format!("expected '{s}', found {}", self.peek())))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.pos().err("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat("+") {
                let rhs = self.term()?;
                lhs = Ast { node: Node::Add(Box::new(lhs), Box::new(rhs)), pos };
            } else if self.eat("-") {
                let rhs = self.term()?;
                lhs = Ast { node: Node::Sub(Box::new(lhs), Box::new(rhs)), pos };
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat("*") {
                let rhs = self.unary()?;
                lhs = Ast { node: Node::Mul(Box::new(lhs), Box::new(rhs)), pos };
            } else if self.eat("/") {
                let rhs = self.unary()?;
                lhs = Ast { node: Node::Div(Box::new(lhs), Box::new(rhs)), pos };
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        let pos = self.pos();
        if self.eat("-") {
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Ast { node: Node::Neg(Box::new(inner)), pos });
        }
        if self.eat("+") {
            self.enter()?;
            let inner = self.unary();
            self.depth -= 1;
            return inner;
        }
        let base = self.primary()?;
        let pos = self.pos();
        if self.eat("^") {
            let (tok, epos) = self.next();
            let Tok::Num(e) = tok else {
                return Err(epos.err("exponent must be a nonnegative integer literal"));
            };
            let e = e.to_u32().filter(|e| *e <= MAX_POWER).ok_or_else(|| epos.err(format!("exponent above {MAX_POWER}")))?;
            return Ok(Ast { node: Node::Pow(Box::new(base), e), pos });
        }
        Ok(base)
    }

    fn paren_arg(&mut self) -> Result<Box<Ast>, ParseError> {
        self.expect("(")?;
        let e = self.expr()?;
        self.expect(")")?;
        Ok(Box::new(e))
    }

    fn index(&mut self) -> Result<Index, ParseError> {
        let (tok, pos) = self.next();
        match tok {
            Tok::Num(n) if n.is_zero() => Ok(Index::T),
            Tok::Ident(name) => {
                let id = free_id(&name).ok_or_else(|| pos.err(format!("bad index name '{name}'")))?;
                if id >= SCRATCH_BASE {
                    return Err(pos.err(format!("index name '{name}' is reserved")));
                }
                let l = Label::Free(id);
                Ok(if self.eat("'") { Index::Anti(l) } else { Index::Hol(l) })
            }
            t => Err(pos.err(format!("expected an index, found {t}"))),
        }
    }

    fn index_list(&mut self) -> Result<Vec<Index>, ParseError> {
        self.expect("[")?;
        let mut out = vec![self.index()?];
        while self.eat(",") {
            out.push(self.index()?);
        }
        self.expect("]")?;
        Ok(out)
    }

    fn primary(&mut self) -> Result<Ast, ParseError> {
        let (tok, pos) = self.next();
        let node = match tok {
            Tok::Num(n) => Node::Num(n),
            Tok::Macro(m) => Node::Macro(m),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect(")")?;
                return Ok(e);
            }
            Tok::Ident(name) => match name.as_str() {
                "I" => Node::Imag,
                "n" | "p" | "s" => Node::Var(Var::from_name(&name).expect("variable")),
                "f" => {
                    if matches!(self.peek(), Tok::Sym("[")) {
                        Node::Jet(self.index_list()?)
                    } else {
                        Node::BareF
                    }
                }
                "g" => Node::Named(TensorName::G, vec![]),
                "df2" => Node::Named(TensorName::DfNorm2, vec![]),
                "D" | "E" | "G" => {
                    let args = self.index_list()?;
                    let t = match (name.as_str(), args.len()) {
                        ("D", 2) => TensorName::D2,
                        ("D", 1) => TensorName::D1,
                        ("E", 2) => TensorName::E2,
                        ("E", 1) => TensorName::E1,
                        ("G", 1) => TensorName::G1,
                        _ => return Err(pos.err(format!("{name} takes {} indices", if name == "G" { "1" } else { "1 or 2" }))),
                    };
                    Node::Named(t, args)
                }
                "exp" => Node::Exp(self.paren_arg()?),
                "conj" => Node::Conj(self.paren_arg()?),
                "Re" => Node::Re(self.paren_arg()?),
                "abs2" => Node::Abs2(self.paren_arg()?),
                "Z" => {
                    self.expect("[")?;
                    let i = self.index()?;
                    self.expect("]")?;
                    Node::Z(i, self.paren_arg()?)
                }
                "delta" => {
                    self.expect("(")?;
                    let a = self.index()?;
                    self.expect(",")?;
                    let b = self.index()?;
                    self.expect(")")?;
                    Node::Delta(a, b)
                }
                _ => return Err(pos.err(format!("unknown identifier '{name}'"))),
            },
            t => return Err(pos.err(format!("unexpected {t}"))),
        };
        Ok(Ast { node, pos })
    }
}

type Usage = BTreeMap<u8, u32>;

fn add_usage(a: &mut Usage, b: &Usage, times: u32) {
    for (k, v) in b {
        *a.entry(*k).or_default() += v * times;
    }
}

fn index_usage(idx: &[Index]) -> Usage {
    let mut u = Usage::new();
    for i in idx {
        if let Some(Label::Free(id)) = i.label() {
            *u.entry(id).or_default() += 1;
        }
    }
    u
}

/// Summation bookkeeping: every index letter may occur at most twice in a
/// product.
struct Env<'a, T: Scalar> {
    opts: ParseOptions,
    macros: &'a HashMap<String, Expression<T>>,
}

impl<'a, T: Scalar> Env<'a, T> {
    fn usage(&self, a: &Ast) -> Result<Usage, ParseError> {
        let u = match &a.node {
            Node::Num(_) | Node::Imag | Node::Var(_) | Node::BareF | Node::Exp(_) => Usage::new(),
            Node::Jet(idx) | Node::Named(_, idx) => index_usage(idx),
            Node::Delta(x, y) => index_usage(&[*x, *y]),
            Node::Macro(m) => match self.macros.get(m) {
                Some(e) => index_usage(&e.signature().unwrap_or_default().into_iter().collect::<Vec<_>>()),
                None => Usage::new(),
            },
            Node::Conj(x) | Node::Re(x) | Node::Neg(x) => self.usage(x)?,
            Node::Abs2(x) => {
                let mut u = Usage::new();
                add_usage(&mut u, &self.usage(x)?, 2);
                u
            }
            Node::Pow(x, e) => {
                let mut u = Usage::new();
                add_usage(&mut u, &self.usage(x)?, *e);
                u
            }
            Node::Z(i, x) => {
                let mut u = self.usage(x)?;
                add_usage(&mut u, &index_usage(&[*i]), 1);
                u
            }
            Node::Add(x, y) | Node::Sub(x, y) => {
                let mut u = self.usage(x)?;
                for (k, v) in self.usage(y)? {
                    let e = u.entry(k).or_default();
                    *e = (*e).max(v);
                }
                u
            }
            Node::Mul(x, y) => {
                let mut u = self.usage(x)?;
                add_usage(&mut u, &self.usage(y)?, 1);
                u
            }
            Node::Div(x, _) => self.usage(x)?,
        };
        if let Some((id, _)) = u.iter().find(|(_, v)| **v > 2) {
            return Err(a.pos.err(format!("index '{}' used more than twice", crate::index::free_name(*id))));
        }
        Ok(u)
    }

    fn eval(&self, a: &Ast) -> Result<Expression<T>, ParseError> {
        let wrap = |e: ExprError| a.pos.err(e.to_string());
        Ok(match &a.node {
            Node::Num(n) => Expression::real(T::from_rational(&BigRational::from_integer(n.clone()))),
            Node::Imag => Expression::i(),
            Node::Var(v) => Expression::var(*v),
            Node::BareF => return Err(a.pos.err("bare 'f' is only allowed inside exp(...)")),
            Node::Jet(idx) => Expression::try_jet(idx).map_err(wrap)?,
            Node::Named(t, idx) => {
                if !self.opts.expand_named {
                    return Err(a.pos.err(format!("named tensor {t} not allowed here")));
                }
                self.opts.defs.build(*t, idx).map_err(wrap)?
            }
            Node::Macro(m) => self.macros.get(m).cloned().ok_or_else(|| a.pos.err(format!("undefined macro ${m}")))?,
            Node::Exp(x) => {
                let (k, c) = linear(x)?;
                Expression::exp(exp_factor(&k, &c, x.pos)?)
            }
            Node::Conj(x) => self.eval(x)?.conj(),
            Node::Re(x) => self.eval(x)?.re_part().map_err(wrap)?,
            Node::Abs2(x) => {
                let v = self.eval(x)?;
                v.try_mul(&v.conj()).map_err(wrap)?
            }
            Node::Z(i, x) => self.eval(x)?.z_derivative(*i).map_err(wrap)?,
            Node::Delta(x, y) => match (x, y) {
                (Index::Hol(h), Index::Anti(b)) | (Index::Anti(b), Index::Hol(h)) => Expression::delta(*h, *b),
                _ => return Err(a.pos.err("delta needs one unbarred and one barred index")),
            },
            Node::Neg(x) => -self.eval(x)?,
            Node::Add(x, y) => self.eval(x)?.try_add(&self.eval(y)?).map_err(wrap)?,
            Node::Sub(x, y) => self.eval(x)?.try_sub(&self.eval(y)?).map_err(wrap)?,
            Node::Mul(x, y) => self.eval(x)?.try_mul(&self.eval(y)?).map_err(wrap)?,
            Node::Div(x, y) => {
                let d = self.eval(y)?;
                let inv = numeric_constant(&d).and_then(|c| c.inv()).ok_or_else(|| y.pos.err("can only divide by a nonzero number"))?;
                self.eval(x)?.try_mul(&gaussian(inv)).map_err(wrap)?
            }
            Node::Pow(x, e) => self.eval(x)?.pow(*e).map_err(wrap)?,
        })
    }
}

fn numeric_constant<T: Scalar>(e: &Expression<T>) -> Option<Gaussian<T>> {
    if e.is_zero() {
        return Some(Gaussian::zero());
    }
    if e.len() != 1 || e.max_jet_len() > 0 || e.terms().any(|(t, _)| !t.exp().is_identity() || !t.deltas().is_empty()) {
        return None;
    }
    e.constant_part().as_constant()
}

type Lin = (CoeffPoly<BigRational>, CoeffPoly<BigRational>);

/// Splits an exponent into `k·f + c`.
fn linear(a: &Ast) -> Result<Lin, ParseError> {
    let nonlinear = || a.pos.err("exponent must be linear in f");
    Ok(match &a.node {
        Node::Num(n) => (CoeffPoly::zero(), CoeffPoly::real(BigRational::from_integer(n.clone()))),
        Node::Imag => (CoeffPoly::zero(), CoeffPoly::i()),
        Node::Var(v) => (CoeffPoly::zero(), CoeffPoly::var(*v)),
        Node::BareF => (CoeffPoly::one(), CoeffPoly::zero()),
        Node::Neg(x) => {
            let (k, c) = linear(x)?;
            (-k, -c)
        }
        Node::Add(x, y) | Node::Sub(x, y) => {
            let (k1, c1) = linear(x)?;
            let (k2, c2) = linear(y)?;
            if matches!(a.node, Node::Add(..)) {
                (k1 + k2, c1 + c2)
            } else {
                (k1 - k2, c1 - c2)
            }
        }
        Node::Mul(x, y) => {
            let (k1, c1) = linear(x)?;
            let (k2, c2) = linear(y)?;
            if !k1.is_zero() && !k2.is_zero() {
                return Err(nonlinear());
            }
            (&(&k1 * &c2) + &(&c1 * &k2), &c1 * &c2)
        }
        Node::Div(x, y) => {
            let (k1, c1) = linear(x)?;
            let (k2, c2) = linear(y)?;
            let inv = match (k2.is_zero(), c2.as_constant()) {
                (true, Some(c)) if c2.len() == 1 && c2.degree(Var::N) + c2.degree(Var::P) + c2.degree(Var::S) == 0 => c.inv(),
                _ => None,
            }
            .ok_or_else(|| y.pos.err("can only divide by a nonzero number"))?;
            (k1.scale(&inv), c1.scale(&inv))
        }
        Node::Pow(x, e) => {
            let (k, c) = linear(x)?;
            match (k.is_zero(), e) {
                (_, 0) => (CoeffPoly::zero(), CoeffPoly::one()),
                (_, 1) => (k, c),
                (true, e) => (k, c.pow(*e)),
                _ => return Err(nonlinear()),
            }
        }
        _ => return Err(nonlinear()),
    })
}

fn exp_factor(k: &CoeffPoly<BigRational>, c: &CoeffPoly<BigRational>, pos: Pos) -> Result<ExpFactor, ParseError> {
    if !c.is_zero() {
        return Err(pos.err("exponent must be a multiple of f"));
    }
    let mut out = ExpFactor::identity();
    for (d, g) in k.terms() {
        let bad = || pos.err("weight of f must be a real affine function of n and p");
        if !g.im.is_zero() {
            return Err(bad());
        }
        let r = Scalar::to_ratio64(&g.re).ok_or_else(bad)?;
        match d {
            [0, 0, 0] => out.c = r,
            [1, 0, 0] => out.n = r,
            [0, 1, 0] => out.p = r,
            _ => return Err(bad()),
        }
    }
    Ok(out)
}

fn parse_ast(src: &str, start: Pos, identity: bool) -> Result<(Ast, Option<Ast>), ParseError> {
    let mut p = Parser { toks: lex(src, start)?, k: 0, depth: 0 };
    let lhs = p.expr()?;
    let rhs = if identity {
        p.expect("==")?;
        Some(p.expr()?)
    } else {
        None
    };
    if *p.peek() != Tok::Eof {
        return Err(p.pos().err(format!("unexpected {}", p.peek())));
    }
    Ok((lhs, rhs))
}

/// Named scalar or tensor sub-expressions referenced as `$NAME`.
#[derive(Clone, Debug)]
pub struct Scope<T: Scalar> {
    pub opts: ParseOptions,
    macros: HashMap<String, Expression<T>>,
}

impl<T: Scalar> Scope<T> {
    pub fn new(opts: ParseOptions) -> Self {
        Self { opts, macros: HashMap::new() }
    }

    pub fn define(&mut self, name: &str, value: Expression<T>) {
        self.macros.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Expression<T>> {
        self.macros.get(name)
    }

    fn env(&self) -> Env<'_, T> {
        Env { opts: self.opts, macros: &self.macros }
    }

    fn checked(&self, a: &Ast) -> Result<Expression<T>, ParseError> {
        let env = self.env();
        env.usage(a)?;
        env.eval(a)
    }

    /// Parses one expression whose first character sits at `start`.
    pub fn expression_at(&self, src: &str, start: Pos) -> Result<Expression<T>, ParseError> {
        let (a, _) = parse_ast(src, start, false)?;
        self.checked(&a)
    }

    /// Parses `LHS == RHS`.
    pub fn identity_at(&self, src: &str, start: Pos) -> Result<(Expression<T>, Expression<T>), ParseError> {
        let (l, r) = parse_ast(src, start, true)?;
        let r = r.expect("identity");
        Ok((self.checked(&l)?, self.checked(&r)?))
    }
}

pub fn parse_expression<T: Scalar>(src: &str, opts: &ParseOptions) -> Result<Expression<T>, ParseError> {
    Scope::new(*opts).expression_at(src, Pos::start())
}

pub fn parse_identity<T: Scalar>(src: &str, opts: &ParseOptions) -> Result<(Expression<T>, Expression<T>), ParseError> {
    Scope::new(*opts).identity_at(src, Pos::start())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::{normalize, RewriteConfig};
    use crate::parser::print;
    use num_rational::Rational64;

    type E = Expression<BigRational>;

    fn parse(s: &str) -> Result<E, ParseError> {
        parse_expression(s, &ParseOptions::default())
    }

    #[test]
    fn jets_and_contractions() {
        let e = parse("f[a]*f[a']").unwrap();
        assert!(e.is_scalar());
        assert_eq!(e, parse("df2").unwrap());
        assert!(parse("f[a]*f[a']*f[a]").is_err());
        assert!(parse("f[a] + f[b]").is_err());
    }

    #[test]
    fn error_positions() {
        let err = parse("f[a] +\n  f[b]*?").unwrap_err();
        assert_eq!((err.line, err.col), (2, 8));
        let err = parse("exp(f*f)").unwrap_err();
        assert_eq!((err.line, err.col), (1, 6));
    }

    #[test]
    fn weights() {
        let e = parse("exp((2*n+p)*f/2)").unwrap();
        let (t, _) = e.terms().next().unwrap();
        assert_eq!(t.exp(), ExpFactor::new(0.into(), 1.into(), Rational64::new(1, 2)));
        assert!(parse("exp(f+1)").is_err());
        assert!(parse("exp(s*f)").is_err());
    }

    #[test]
    fn division_by_numbers_only() {
        assert_eq!(parse("f[0]/(2*I)").unwrap(), parse("-I/2*f[0]").unwrap());
        assert!(parse("f[0]/n").is_err());
        assert!(parse("f[0]/0").is_err());
    }

    #[test]
    fn named_tensors_can_be_rejected() {
        let opts = ParseOptions { expand_named: false, ..ParseOptions::default() };
        assert!(parse_expression::<BigRational>("D[a,b]", &opts).is_err());
        assert!(parse("D[a,b']").is_err());
        assert!(parse("E[a,b']*E[a',b]").unwrap().is_scalar());
    }

    #[test]
    fn reserved_names() {
        assert!(parse("f[a8]").is_err());
        assert!(parse("f[z6]").is_ok());
    }

    #[test]
    fn printed_form_reparses() {
        let e = normalize(&parse("abs2(E[a,b'] + I/3*f[a,0]*f[b'])*exp((n-1/2)*f)").unwrap(), &RewriteConfig::default()).unwrap();
        assert_eq!(parse(&print(&e)).unwrap(), e);
    }

    #[test]
    fn identities() {
        let (l, r) = parse_identity::<BigRational>("Z[a'](df2) == f[b,a']*f[b'] + f[b]*f[b',a']", &ParseOptions::default()).unwrap();
        assert_eq!(l, r);
        assert!(parse_identity::<BigRational>("f[0]", &ParseOptions::default()).is_err());
    }

    #[test]
    fn deep_nesting_is_an_error() {
        let s = format!("{}1{}", "(".repeat(1000), ")".repeat(1000));
        assert!(parse(&s).is_err());
        let s = format!("{}1", "-".repeat(1000));
        assert!(parse(&s).is_err());
    }
}
