// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chronokg_core::{
    Action, ChangeLog, Edge, Iri, ParseError, ParseErrorKind, Quintuple, StationaryGraph,
    TemporalOntology, Tick, TimePoint, ViewKind,
};

/// Replays events with commit ≤ `at` straight from the view definitions:
/// a list of quintuples for the incremental image, its active part for the
/// semi-incremental one and the projection of that for the mutable one.
pub fn naive_edges(log: &ChangeLog, kind: ViewKind, at: Tick) -> BTreeSet<Edge> {
    let mut quints: Vec<Quintuple> = Vec::new();
    for e in log.events().iter().filter(|e| e.commit_time <= at) {
        match &e.action {
            Action::Assert { edge } => quints.push(edge.clone()),
            Action::Close { key, valid_until } => {
                let i = quints
                    .iter()
                    .position(|q| q.same_triple(key) && q.valid_until() == TimePoint::PosInf)
                    .expect("valid log closes an active edge");
                quints[i] = quints[i].with_valid_until(TimePoint::Finite(*valid_until));
            }
            Action::Retract { key } => {
                quints.retain(|q| !(q.same_triple(key) && q.valid_until() == TimePoint::PosInf))
            }
        }
    }
    match kind {
        ViewKind::Incremental => quints.into_iter().map(Edge::Quintuple).collect(),
        ViewKind::SemiIncremental => quints
            .into_iter()
            .filter(|q| q.valid_until() == TimePoint::PosInf)
            .map(Edge::Quintuple)
            .collect(),
        ViewKind::Mutable => quints
            .into_iter()
            .filter(|q| q.valid_until() == TimePoint::PosInf)
            .map(|q| Edge::Triple(q.into_triple()))
            .collect(),
    }
}

pub fn edge_set(graph: &StationaryGraph) -> BTreeSet<Edge> {
    graph.edges().collect()
}

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn fixtures(dir: &str) -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(dir);
    let mut files: Vec<PathBuf> = std::fs::read_dir(&root)
        .unwrap_or_else(|e| panic!("{}: {e}", root.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
}

/// `# expect: <line> <KIND>` headers of a malformed fixture.
pub fn expected_errors(text: &str) -> Vec<(usize, ParseErrorKind)> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# expect: "))
        .map(|rest| {
            let (line, kind) = rest.split_once(' ').expect("line and kind");
            let kind = match kind.trim() {
                "SYNTAX" => ParseErrorKind::Syntax,
                "UNKNOWN_KEYWORD" => ParseErrorKind::UnknownKeyword,
                "BAD_TIMEPOINT" => ParseErrorKind::BadTimepoint,
                "BAD_TERM" => ParseErrorKind::BadTerm,
                "DUPLICATE_DECL" => ParseErrorKind::DuplicateDecl,
                other => panic!("unknown kind {other}"),
            };
            (line.parse().unwrap(), kind)
        })
        .collect()
}

/// Parses a fixture by extension and writes it back canonically.
pub fn parse_and_write(path: &Path, text: &str) -> Result<String, Vec<ParseError>> {
    use chronokg_core::serialize::*;
    match path.extension().and_then(|e| e.to_str()) {
        Some("kg") => parse_triples(text).map(|g| write_triples(&g)),
        Some("rkg") => parse_quintuples(text).map(|g| write_quintuples(&g)),
        Some("ont") => parse_ontology(text).map(|o| write_ontology(&o)),
        Some("log") => {
            let events = parse_events(text)?;
            let ontology = TemporalOntology::permissive(
                iri("type"),
                events
                    .iter()
                    .map(|(_, e)| e.key())
                    .collect::<Vec<_>>()
                    .iter(),
            );
            let log = ChangeLog::from_events(ontology, events.into_iter().map(|(_, e)| e))
                .unwrap_or_else(|(i, e)| panic!("{}: event {i}: {e}", path.display()));
            Ok(write_event_log(&log))
        }
        other => panic!("unexpected fixture extension {other:?}"),
    }
}
