// SPDX-License-Identifier: Apache-2.0

//! Line-oriented text formats for triples, quintuples, ontologies and change
//! logs.
//!
//! Readers accept arbitrary runs of spaces and tabs, LF or CRLF line endings,
//! blank lines and `#` comments, and report every error they find in one
//! pass. Writers emit a canonical form: single spaces, LF endings and a
//! trailing newline, so that `parse(write(v)) == v`.

mod events;
mod graph;
mod lexer;
mod ontology;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::log::AppendError;
use crate::model::Triple;

pub use events::{build_event_log, parse_event_log, parse_events, write_event_log};
pub use graph::{
    parse_graph, parse_quintuples, parse_term, parse_triples, write_graph, write_quintuples,
    write_triples,
};
pub use ontology::{parse_ontology, write_ontology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParseErrorKind {
    Syntax,
    UnknownKeyword,
    BadTimepoint,
    BadTerm,
    DuplicateDecl,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "SYNTAX",
            ParseErrorKind::UnknownKeyword => "UNKNOWN_KEYWORD",
            ParseErrorKind::BadTimepoint => "BAD_TIMEPOINT",
            ParseErrorKind::BadTerm => "BAD_TERM",
            ParseErrorKind::DuplicateDecl => "DUPLICATE_DECL",
        })
    }
}

/// Positions are 1-based and count characters, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(
        line: usize,
        column: usize,
        kind: ParseErrorKind,
        message: impl Into<String>,
    ) -> Self {
        ParseError {
            line,
            column,
            kind,
            message: message.into(),
        }
    }
}

/// An event that parsed but was refused by the log.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}: {error}")]
pub struct LineAppendError {
    pub line: usize,
    /// Triple the refused event was about.
    pub key: Triple,
    pub error: AppendError,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("{} parse error(s)", .0.len())]
    Parse(Vec<ParseError>),
    #[error("{} rejected event(s)", .0.len())]
    Append(Vec<LineAppendError>),
}
