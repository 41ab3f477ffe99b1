//! Concrete syntax for formulas and the model document format.

mod document;
mod grammar;
mod printer;

use std::fmt;

use thiserror::Error;

pub use document::{dump_model, load_model, load_model_document, model_to_json, CostDocument, LoadError, ModelDocument};
pub use grammar::{parse_formula, parse_prop, parse_surface};
pub use printer::{print_formula, print_prop};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Unexpected input.
    Syntax,
    /// A modal operator or inequality where only propositional formulas are allowed.
    NotPropositional,
    /// Well-formed text with an unusable value, such as a zero denominator.
    Invalid,
}

/// Where parsing stopped and what was expected there. `line` and `column`
/// start at 1; `offset` is in bytes.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub expected: String,
}

impl ParseError {
    pub(crate) fn at(src: &str, offset: usize, kind: ParseErrorKind, expected: String) -> ParseError {
        let offset = offset.min(src.len());
        let before = &src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { offset, line, column, kind, expected }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ParseErrorKind::Syntax => "expected",
            ParseErrorKind::NotPropositional => "expected",
            ParseErrorKind::Invalid => "invalid input:",
        };
        write!(f, "line {}, column {}: {} {}", self.line, self.column, what, self.expected)
    }
}
