//! A small line-oriented text format for algebras and group actions.
//!
//! ```text
//! # dual numbers
//! algebra dual { basis 1, e; e*e = 0; }
//! builtin product(dual, matrix(2))
//! action { group cyclic(2); g: r.1 -> 1 - r.1; }
//! ```
//!
//! Products with the unit are filled in automatically. Other products that are not
//! mentioned are zero unless the algebra is marked `strict`.

mod elaborate;
mod lexer;
mod parser;
mod print;

use std::fmt;

use crate::scalar::Scalar;

pub use elaborate::{elaborate, elaborate_action, elaborate_document, load, Loaded};
pub use parser::{parse, parse_document};
pub use print::print_algebra;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A positioned error with the set of tokens that would have been accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>, expected: Vec<String>) -> Diagnostic {
        Diagnostic { pos, message: message.into(), expected }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub pos: Pos,
}

/// `name(args…)`; arguments are integers or nested calls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Call {
    pub name: Name,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Int(usize, Pos),
    Call(Call),
}

/// One summand of a linear combination; `basis = None` means a multiple of the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Scalar,
    pub basis: Option<Name>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub left: Name,
    pub right: Name,
    pub rhs: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub name: Name,
    pub strict: bool,
    pub basis: Vec<Name>,
    pub unit: Option<Name>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraSpec {
    Builtin(Call),
    Table(TableSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTableSpec {
    pub name: Option<Name>,
    pub elements: Vec<Name>,
    pub products: Vec<(Name, Name, Name)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Named(Call),
    Table(GroupTableSpec),
}

/// Images of basis elements under one group element; unlisted basis elements are fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementMap {
    pub element: Name,
    pub images: Vec<(Name, Vec<Term>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupActionSpec {
    pub pos: Pos,
    pub group: GroupSpec,
    pub maps: Vec<ElementMap>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Algebra(AlgebraSpec),
    Group(GroupTableSpec),
    Action(GroupActionSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub items: Vec<Item>,
}
