// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use crate::model::{Quintuple, ReminiscentKG, StandardKG, Term, Triple};
use crate::views::StationaryGraph;

use super::lexer::{lines, tokenize, Cursor, TokenKind};
use super::ParseError;

/// Parses `<h> <r> <t> .` lines. Repeated lines collapse.
pub fn parse_triples(text: &str) -> Result<StandardKG, Vec<ParseError>> {
    parse_lines(text, |cur| {
        let triple = read_triple(cur)?;
        cur.dot()?;
        cur.end()?;
        Ok(triple)
    })
    .map(|edges| edges.into_iter().map(|(_, e)| e).collect())
}

/// Parses `<h> <r> <t> <from> <until> .` lines, where the bounds are
/// integers, `-inf` or `inf`. Inverted intervals are kept for validation to
/// report.
pub fn parse_quintuples(text: &str) -> Result<ReminiscentKG, Vec<ParseError>> {
    parse_lines(text, |cur| {
        let triple = read_triple(cur)?;
        let from = cur.timepoint("valid_from")?;
        let until = cur.timepoint("valid_until")?;
        cur.dot()?;
        cur.end()?;
        Ok(Quintuple::new_unchecked(triple, from, until))
    })
    .map(|edges| edges.into_iter().map(|(_, e)| e).collect())
}

/// Parses either grammar, picking the one whose arity matches the first
/// edge line. An empty file is an empty triple store.
pub fn parse_graph(text: &str) -> Result<StationaryGraph, Vec<ParseError>> {
    let quintuples = lines(text)
        .filter_map(|(n, l)| tokenize(n, l).ok())
        .find(|t| !t.is_empty())
        .is_some_and(|t| t.iter().filter(|t| t.kind != TokenKind::Dot).count() == 5);
    if quintuples {
        parse_quintuples(text).map(StationaryGraph::Reminiscent)
    } else {
        parse_triples(text).map(StationaryGraph::Standard)
    }
}

/// Parses one term: `<id>` or `"lexical"^^<datatype>`.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let tokens = tokenize(1, text)?;
    let mut cur = Cursor::new(1, text, &tokens);
    let term = cur.term()?;
    cur.end()?;
    Ok(term)
}

fn read_triple(cur: &mut Cursor<'_>) -> Result<Triple, ParseError> {
    let head = cur.iri("head entity")?;
    let relation = cur.iri("relation")?;
    let tail = cur.term()?;
    Ok(Triple::new(head, relation, tail))
}

/// Runs `parse_line` over every non-empty line and gathers all errors.
/// Values come back with their 1-based line numbers.
pub(super) fn parse_lines<T, F>(
    text: &str,
    mut parse_line: F,
) -> Result<Vec<(usize, T)>, Vec<ParseError>>
where
    F: FnMut(&mut Cursor<'_>) -> Result<T, ParseError>,
{
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for (n, line) in lines(text) {
        let tokens = match tokenize(n, line) {
            Ok(t) if t.is_empty() => continue,
            Ok(t) => t,
            Err(e) => {
                errors.push(e);
                continue;
            }
        };
        let mut cur = Cursor::new(n, line, &tokens);
        match parse_line(&mut cur) {
            Ok(v) => values.push((n, v)),
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok(values)
    } else {
        Err(errors)
    }
}

pub fn write_triples(graph: &StandardKG) -> String {
    let mut out = String::new();
    for e in graph.edges() {
        writeln!(out, "{e} .").expect("writing to a String");
    }
    out
}

pub fn write_quintuples(graph: &ReminiscentKG) -> String {
    let mut out = String::new();
    for e in graph.edges() {
        writeln!(out, "{e} .").expect("writing to a String");
    }
    out
}

pub fn write_graph(graph: &StationaryGraph) -> String {
    match graph {
        StationaryGraph::Standard(g) => write_triples(g),
        StationaryGraph::Reminiscent(g) => write_quintuples(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Iri, TimePoint};
    use crate::serialize::ParseErrorKind;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn triple_lines() {
        let g = parse_triples("<UK> <member> <EU> .\n<EU> <founded> \"1951\"^^<year> .\n").unwrap();
        let edges: Vec<_> = g.edges().iter().cloned().collect();
        assert_eq!(
            edges,
            [
                Triple::new(
                    iri("EU"),
                    iri("founded"),
                    Term::literal("1951", "year").unwrap()
                ),
                Triple::new(iri("UK"), iri("member"), Term::Entity(iri("EU"))),
            ]
        );
    }

    #[test]
    fn missing_tail_points_at_the_dot() {
        let errs = parse_triples("<UK> <member> .").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(
            (errs[0].line, errs[0].column, errs[0].kind),
            (1, 15, ParseErrorKind::Syntax)
        );
    }

    #[test]
    fn quintuple_lines() {
        let g =
            parse_quintuples("<UK> <member> <EU> 1973 2020 .\r\n<UK> <member> <EU> 1973 inf .\n")
                .unwrap();
        let bounds: Vec<_> = g
            .edges()
            .iter()
            .map(|q| (q.valid_from(), q.valid_until()))
            .collect();
        assert_eq!(
            bounds,
            [(1973.into(), 2020.into()), (1973.into(), TimePoint::PosInf)]
        );
        let errs = parse_quintuples("<a> <r> <b> x 5 .").unwrap_err();
        assert_eq!(
            (errs[0].column, errs[0].kind),
            (13, ParseErrorKind::BadTimepoint)
        );
    }

    #[test]
    fn inverted_bounds_parse() {
        let g = parse_quintuples("<a> <r> <b> 2020 1973 .").unwrap();
        assert!(!g.edges().iter().next().unwrap().is_well_ordered());
    }

    #[test]
    fn every_error_is_reported() {
        let text = "<a> <r> <b> .\n<a> <r>\n\n# fine\n<a> <r> <b> . extra\n\"x\"^^<s> <r> <b> .\n";
        let errs = parse_triples(text).unwrap_err();
        let lines: Vec<usize> = errs.iter().map(|e| e.line).collect();
        assert_eq!(lines, [2, 5, 6]);
        assert_eq!(errs[2].kind, ParseErrorKind::BadTerm);
    }

    #[test]
    fn canonical_output_is_sorted() {
        let g =
            parse_quintuples("<b> <r> <c> -inf inf .\n<a>   <r> <c> 5 inf .\n<a> <r> <c> 1 3 .\n")
                .unwrap();
        assert_eq!(
            write_quintuples(&g),
            "<a> <r> <c> 1 3 .\n<a> <r> <c> 5 inf .\n<b> <r> <c> -inf inf .\n"
        );
        assert_eq!(write_triples(&StandardKG::new()), "");
    }

    #[test]
    fn single_terms() {
        assert_eq!(parse_term(" <UK> ").unwrap(), Term::Entity(iri("UK")));
        assert_eq!(
            parse_term("\"1951\"^^<year>").unwrap(),
            Term::literal("1951", "year").unwrap()
        );
        assert_eq!(parse_term("<a> <b>").unwrap_err().column, 5);
        assert_eq!(parse_term("").unwrap_err().kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn graph_shape_detection() {
        assert!(matches!(
            parse_graph("# c\n<a> <r> <b> 1 inf .").unwrap(),
            StationaryGraph::Reminiscent(_)
        ));
        assert!(matches!(
            parse_graph("<a> <r> <b> .").unwrap(),
            StationaryGraph::Standard(_)
        ));
        assert!(matches!(
            parse_graph("").unwrap(),
            StationaryGraph::Standard(_)
        ));
    }
}
