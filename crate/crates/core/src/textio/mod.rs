//! Text formats for programs and nets: parsing with source spans,
//! canonical serialization, and JSON output.
//!
//! Program syntax:
//!
//! ```text
//! % comment
//! a.                      % fact
//! theta b = 3/2.          % threshold declaration
//! b <- a, c : -1/2.       % rule; weight defaults to 1
//! ```
//!
//! Net syntax:
//!
//! ```text
//! node a fact.
//! node b theta 1.
//! edge a -> b : 2.
//! ```

mod json;
mod lexer;
mod parse;
mod serialize;

use std::fmt;

pub use json::{envelope, interpretation_json, interpretations_json, net_json, program_json};
pub use parse::{parse_net_with, parse_program_with};
pub use serialize::{serialize_net, serialize_program};

use crate::net::Net;
use crate::program::Program;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: String,
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub(crate) fn start(file: &str) -> Self {
        SourceSpan { file: file.to_string(), line: 1, column: 1, length: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    Lexical,
    Syntactic,
    Validation,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Lexical => "lexical error",
            Category::Syntactic => "syntax error",
            Category::Validation => "invalid input",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}:{}:{}: {category}: {message}", span.file, span.line, span.column)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub category: Category,
}

#[derive(Clone, Debug)]
pub struct ParseOptions {
    /// Name reported in error locations.
    pub file: String,
    pub permit_zero_weights: bool,
    /// Report every error instead of stopping at the first.
    pub all_errors: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { file: "<input>".into(), permit_zero_weights: false, all_errors: false }
    }
}

/// Parses a program with default options, returning the first error.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with(text, &ParseOptions::default()).map_err(|mut e| e.swap_remove(0))
}

/// Parses a net with default options, returning the first error.
pub fn parse_net(text: &str) -> Result<Net, ParseError> {
    parse_net_with(text, &ParseOptions::default()).map_err(|mut e| e.swap_remove(0))
}
