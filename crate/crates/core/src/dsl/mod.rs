//! The `.form` text format: declarations of variable lists, forms, maps,
//! metrics, and torsion coefficients.
//!
//! A document is a sequence of declarations. A `vars(...)` list brings a
//! coordinate space into scope; every following form, map, metric, or
//! torsion declaration binds to the innermost such list. Within a form,
//! `dx` names the differential of a declared variable `x`, `^` wedges
//! differentials, and coefficient arithmetic uses `+ - * /` with `**` for
//! integer powers. `#` starts a line comment.
//!
//! ```text
//! vars(x, y);
//! form w : 1 = x dy;            # a 1-form
//! form F : 2 = dy^dx;           # reorders to -dx^dy
//! map phi : (t) -> (t, t**2);   # a curve into the (x, y) space
//! metric g = +1, -1;
//! torsion T[x] = dx^dy;
//! ```
//!
//! Parsing never panics on malformed input: every failure carries its line
//! and column. Rendering is canonical, and parsing a rendered document
//! reproduces the original values exactly.

mod lexer;
mod parser;
mod render;

use std::fmt;

use crate::error::Error;
use crate::evolutionary::StructureCoefficients;
use crate::forms::{DifferentialForm, ParamMap, Variables};
use crate::metric::DiagonalMetric;

pub use parser::parse;
pub use render::{render_document, render_form};

/// One declaration, in document order.
#[derive(Clone, Debug, PartialEq)]
pub enum Declaration {
    /// `vars(x, y);` -- establishes the active coordinate space.
    Variables(Variables),
    /// `form name : degree = sum;`
    Form { name: String, form: DifferentialForm },
    /// `map name : (s, ...) -> (expr, ...);` into the active space.
    Map { name: String, map: ParamMap },
    /// `metric name = +1, -1, ...;` over the active space.
    Metric {
        name: String,
        metric: DiagonalMetric,
        variables: Variables,
    },
    /// `torsion name[var] = sum;` -- one torsion coefficient.
    Torsion {
        name: String,
        var: String,
        form: DifferentialForm,
    },
}

/// A parsed `.form` document.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    declarations: Vec<Declaration>,
}

impl Document {
    pub fn declarations(&self) -> &[Declaration] {
        &self.declarations
    }

    pub fn is_empty(&self) -> bool {
        self.declarations.is_empty()
    }

    /// Named forms in declaration order.
    pub fn forms(&self) -> impl Iterator<Item = (&str, &DifferentialForm)> {
        self.declarations.iter().filter_map(|d| match d {
            Declaration::Form { name, form } => Some((name.as_str(), form)),
            _ => None,
        })
    }

    pub fn form(&self, name: &str) -> Option<&DifferentialForm> {
        self.forms().find(|(n, _)| *n == name).map(|(_, f)| f)
    }

    pub fn map(&self, name: &str) -> Option<&ParamMap> {
        self.declarations.iter().find_map(|d| match d {
            Declaration::Map { name: n, map } if n == name => Some(map),
            _ => None,
        })
    }

    pub fn metric(&self, name: &str) -> Option<&DiagonalMetric> {
        self.declarations.iter().find_map(|d| match d {
            Declaration::Metric { name: n, metric, .. } if n == name => Some(metric),
            _ => None,
        })
    }

    /// Collects every `torsion name[...]` entry into structure
    /// coefficients. `None` when no entry uses the name.
    pub fn torsion(&self, name: &str) -> Option<StructureCoefficients> {
        let mut out: Option<StructureCoefficients> = None;
        for d in &self.declarations {
            if let Declaration::Torsion { name: n, var, form } = d {
                if n != name {
                    continue;
                }
                let set = out.get_or_insert_with(|| {
                    StructureCoefficients::new(form.variables().clone())
                });
                set.set(var, form.clone())
                    .expect("torsion entries are validated at parse time");
            }
        }
        out
    }

    pub(crate) fn push(&mut self, decl: Declaration) {
        self.declarations.push(decl);
    }
}

/// What went wrong, and where.
#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParseErrorKind {
    /// Malformed input: unexpected token or character.
    Syntax(String),
    /// Well-formed input with inconsistent meaning (unknown variable,
    /// degree mismatch, duplicate name, ...).
    Semantic(Error),
}

impl ParseError {
    pub(crate) fn syntax(line: u32, col: u32, message: impl Into<String>) -> Self {
        ParseError { line, col, kind: ParseErrorKind::Syntax(message.into()) }
    }

    pub(crate) fn semantic(line: u32, col: u32, error: Error) -> Self {
        ParseError { line, col, kind: ParseErrorKind::Semantic(error) }
    }

    pub fn is_syntax(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Syntax(_))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(m) => {
                write!(f, "{}:{}: syntax error: {}", self.line, self.col, m)
            }
            ParseErrorKind::Semantic(e) => {
                write!(f, "{}:{}: {}", self.line, self.col, e)
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// A non-fatal oddity noticed while parsing, such as a repeated
/// differential collapsing a term to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Warning {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {}", self.line, self.col, self.message)
    }
}

/// A document together with the warnings its parse produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub document: Document,
    pub warnings: Vec<Warning>,
}
