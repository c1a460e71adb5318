//! Text grammar: parsing, printing and identity catalogs.

mod catalog;
mod parse;
mod print;

pub use catalog::{CaseSource, Catalog, DefSource};
pub use parse::{parse_expression, parse_identity, ParseError, ParseOptions, Pos, Scope};
pub use print::{exponent_text, print};
