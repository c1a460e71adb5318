//! Identity catalog files.
//!
//! ```text
//! # comment
//! @def NAME = expression          (may continue on following lines)
//! @case <id> [pde] "anchor"
//!   LHS == RHS                    (may span lines)
//! ```
//!
//! Definitions are evaluated in file order and referenced as `$NAME`.

use std::collections::HashSet;

use crate::scalar::Scalar;

use super::parse::{ParseError, ParseOptions, Pos, Scope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefSource {
    pub name: String,
    pub body: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseSource {
    pub id: String,
    pub requires_pde: bool,
    pub anchor: String,
    pub body: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    pub defs: Vec<DefSource>,
    pub cases: Vec<CaseSource>,
}

const BUILTIN: &str = include_str!("../../catalog/identities.jet");

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, col, message: message.into() }
}

enum Open {
    None,
    Def(usize, usize),
    Case(usize, usize),
}

impl Catalog {
    /// The catalog compiled into the library.
    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN).expect("builtin catalog parses")
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN
    }

    pub fn parse(text: &str) -> Result<Catalog, ParseError> {
        let mut cat = Catalog::default();
        let mut open = Open::None;
        let mut ids = HashSet::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let trimmed = raw.trim_start();
            if let Some(rest) = trimmed.strip_prefix("@def") {
                let col = raw.len() - trimmed.len() + 5;
                let (name, body) = rest.split_once('=').ok_or_else(|| err(line, col, "expected '@def NAME = expression'"))?;
                let name = name.trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(err(line, col, format!("bad definition name '{name}'")));
                }
                if cat.defs.iter().any(|d| d.name == name) {
                    return Err(err(line, col, format!("${name} defined twice")));
                }
                let body_col = raw.len() - body.len() + 1;
                cat.defs.push(DefSource { name: name.to_string(), body: strip_comment(body), pos: Pos { line, col: body_col } });
                open = Open::Def(cat.defs.len() - 1, line);
            } else if let Some(rest) = trimmed.strip_prefix("@case") {
                let col = raw.len() - trimmed.len() + 1;
                let case = parse_header(rest, line, col)?;
                if !ids.insert(case.id.clone()) {
                    return Err(err(line, col, format!("case {} defined twice", case.id)));
                }
                cat.cases.push(case);
                open = Open::Case(cat.cases.len() - 1, 0);
            } else if trimmed.starts_with('@') {
                return Err(err(line, raw.len() - trimmed.len() + 1, "unknown directive"));
            } else {
                let body = strip_comment(raw);
                if body.trim().is_empty() {
                    continue;
                }
                let (target, last) = match &mut open {
                    Open::None => return Err(err(line, 1, "expression outside @def or @case")),
                    Open::Def(d, last) => (&mut cat.defs[*d].body, last),
                    Open::Case(c, last) => {
                        let case = &mut cat.cases[*c];
                        if *last == 0 {
                            case.pos = Pos { line, col: 1 };
                            *last = line;
                        }
                        (&mut case.body, last)
                    }
                };
                // keep line structure so that error positions stay exact
                for _ in *last..line {
                    target.push('\n');
                }
                target.push_str(&body);
                *last = line;
            }
        }
        if let Some(c) = cat.cases.iter().find(|c| c.body.trim().is_empty()) {
            return Err(err(c.pos.line, c.pos.col, format!("case {} has no body", c.id)));
        }
        Ok(cat)
    }

    /// Evaluates all definitions in order.
    pub fn scope<T: Scalar>(&self, opts: &ParseOptions) -> Result<Scope<T>, ParseError> {
        let mut scope = Scope::new(*opts);
        for d in &self.defs {
            let v = scope.expression_at(&d.body, d.pos)?;
            scope.define(&d.name, v);
        }
        Ok(scope)
    }
}

fn strip_comment(s: &str) -> String {
    match s.find('#') {
        Some(k) => s[..k].to_string(),
        None => s.to_string(),
    }
}

fn parse_header(rest: &str, line: usize, col: usize) -> Result<CaseSource, ParseError> {
    let (head, anchor) = match rest.find('"') {
        Some(q) => {
            let tail = &rest[q + 1..];
            let end = tail.find('"').ok_or_else(|| err(line, col, "unterminated anchor string"))?;
            if !tail[end + 1..].trim().is_empty() {
                return Err(err(line, col, "text after anchor string"));
            }
            (&rest[..q], tail[..end].to_string())
        }
        None => (rest, String::new()),
    };
    let mut words = head.split_whitespace();
    let id = words.next().ok_or_else(|| err(line, col, "expected a case id"))?.to_string();
    let mut requires_pde = false;
    for w in words {
        match w {
            "pde" => requires_pde = true,
            _ => return Err(err(line, col, format!("unknown case flag '{w}'"))),
        }
    }
    Ok(CaseSource { id, requires_pde, anchor, body: String::new(), pos: Pos { line: line + 1, col: 1 } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn headers_defs_and_bodies() {
        let text = "# demo\n@def X = f[a]*\n  f[a']\n@case t.1 pde \"anchor text\"\n  $X ==\n  df2  # same\n";
        let cat = Catalog::parse(text).unwrap();
        assert_eq!(cat.defs.len(), 1);
        let c = &cat.cases[0];
        assert_eq!((c.id.as_str(), c.requires_pde, c.anchor.as_str()), ("t.1", true, "anchor text"));
        let scope = cat.scope::<BigRational>(&ParseOptions::default()).unwrap();
        let (l, r) = scope.identity_at(&c.body, c.pos).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn errors_report_file_lines() {
        let text = "@case x\n  f[a] ==\n  f[a] + ?\n";
        let cat = Catalog::parse(text).unwrap();
        let scope = cat.scope::<BigRational>(&ParseOptions::default()).unwrap();
        let c = &cat.cases[0];
        let e = scope.identity_at(&c.body, c.pos).unwrap_err();
        assert_eq!((e.line, e.col), (3, 10));
        assert!(Catalog::parse("@case a\n1==1\n@case a\n1==1\n").is_err());
        assert!(Catalog::parse("@case a bogus\n1==1\n").is_err());
        assert!(Catalog::parse("1 == 1\n").is_err());
    }

    #[test]
    fn builtin_catalog_compiles() {
        let cat = Catalog::builtin();
        let scope = cat.scope::<BigRational>(&ParseOptions::default()).unwrap();
        for c in &cat.cases {
            scope.identity_at(&c.body, c.pos).unwrap_or_else(|e| panic!("{}: {e}", c.id));
        }
    }
}
