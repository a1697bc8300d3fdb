//! The textual case language.
//!
//! A case file is a sequence of clauses and directives, each ending in `.`:
//!
//! ```text
//! tag(e4, 'Thenardier sees Valjean on the scooter').
//! drives(date(2020,05,12,15,03), date(2020,05,12,15,04), valjean,
//!        vehicle(scooter,12345), witness(thenardier)).
//! end_tag.
//! reliable(thenardier, hi).
//! ```
//!
//! Clauses between `tag(Id)` and the next `tag`/`end_tag` carry the tag `Id`,
//! which is what scenarios switch on and off. Other directives are
//! `suspect(Name)`, `policy(Key = Value, ...)` and
//! `scenario(Id, Tags, Reliabilities, Expected[, Policy])`. Directives may
//! also be written with a leading `:-`.

mod format;
mod lexer;
mod parser;

use std::fmt;

use crate::engine::Clause;

pub use format::{format_atom, format_clause, format_directive, format_literal, format_program, format_term};
pub use lexer::{tokenize, Span, Token, TokenKind};
pub use parser::{parse_program, parse_term};

/// A syntax error, located at the first character of the offending token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// What the parser was looking for.
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

/// A preset what-if question stored in the case file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioPreset {
    pub id: String,
    pub enabled_tags: Vec<String>,
    /// Witness name and `hi`/`lo`.
    pub reliability: Vec<(String, String)>,
    pub policy: Vec<(String, crate::term::Term)>,
    /// `responsible` or `acquitted`.
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    Tag { id: String, summary: Option<String> },
    EndTag,
    Suspect(String),
    Policy(Vec<(String, crate::term::Term)>),
    Scenario(ScenarioPreset),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacedDirective {
    /// Number of clauses that precede the directive in the file.
    pub before_clause: usize,
    pub directive: Directive,
}

/// A parsed case file. Equality ignores source positions.
#[derive(Clone, Debug, Default)]
pub struct SourceProgram {
    pub clauses: Vec<Clause>,
    pub directives: Vec<PlacedDirective>,
    /// Start of each clause, parallel to `clauses`.
    pub positions: Vec<Position>,
}

impl PartialEq for SourceProgram {
    fn eq(&self, other: &Self) -> bool {
        self.clauses == other.clauses && self.directives == other.directives
    }
}

impl Eq for SourceProgram {}

impl SourceProgram {
    pub fn directives(&self) -> impl Iterator<Item = &Directive> {
        self.directives.iter().map(|d| &d.directive)
    }
}
