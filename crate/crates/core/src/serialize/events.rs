// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use crate::log::{ChangeEvent, ChangeLog};
use crate::model::{Quintuple, Triple};
use crate::ontology::TemporalOntology;

use super::graph::parse_lines;
use super::lexer::Cursor;
use super::{LineAppendError, LoadError, ParseError, ParseErrorKind};

/// Parses event lines without replaying them:
///
/// ```text
/// <commit> ASSERT <h> <r> <t> <from> <until>
/// <commit> CLOSE <h> <r> <t> <until>
/// <commit> RETRACT <h> <r> <t>
/// ```
///
/// Returns each event with its 1-based source line.
pub fn parse_events(text: &str) -> Result<Vec<(usize, ChangeEvent)>, Vec<ParseError>> {
    parse_lines(text, |cur| {
        let event = read_event(cur)?;
        cur.end()?;
        Ok(event)
    })
}

fn read_event(cur: &mut Cursor<'_>) -> Result<ChangeEvent, ParseError> {
    let commit = cur.tick("commit time")?;
    let (keyword, token) = cur.word("ASSERT, CLOSE or RETRACT")?;
    let mut key = || -> Result<Triple, ParseError> {
        let head = cur.iri("head entity")?;
        let relation = cur.iri("relation")?;
        let tail = cur.term()?;
        Ok(Triple::new(head, relation, tail))
    };
    match keyword {
        "ASSERT" => {
            let triple = key()?;
            let from = cur.timepoint("valid_from")?;
            let until = cur.timepoint("valid_until")?;
            Ok(ChangeEvent::assert(
                commit,
                Quintuple::new_unchecked(triple, from, until),
            ))
        }
        "CLOSE" => {
            let triple = key()?;
            let until = cur.tick("valid_until")?;
            Ok(ChangeEvent::close(commit, triple, until))
        }
        "RETRACT" => {
            let triple = key()?;
            Ok(ChangeEvent::retract(commit, triple))
        }
        other => Err(cur.error(
            Some(token),
            ParseErrorKind::UnknownKeyword,
            format!("unknown event keyword {other:?}"),
        )),
    }
}

/// Parses and replays an event log under `ontology`.
///
/// Syntax errors stop the load before any replay. Otherwise every event is
/// appended in order; rejected events are skipped and all rejections are
/// reported with their source lines.
pub fn parse_event_log(text: &str, ontology: TemporalOntology) -> Result<ChangeLog, LoadError> {
    let events = parse_events(text).map_err(LoadError::Parse)?;
    build_event_log(events, ontology)
}

/// Appends already-parsed events, skipping and reporting the ones the log
/// refuses.
pub fn build_event_log(
    events: Vec<(usize, ChangeEvent)>,
    ontology: TemporalOntology,
) -> Result<ChangeLog, LoadError> {
    let mut log = ChangeLog::new(ontology);
    let mut rejected = Vec::new();
    for (line, event) in events {
        let key = event.key();
        if let Err(error) = log.append(event) {
            rejected.push(LineAppendError { line, key, error });
        }
    }
    if rejected.is_empty() {
        Ok(log)
    } else {
        Err(LoadError::Append(rejected))
    }
}

/// One event per line, in log order.
pub fn write_event_log(log: &ChangeLog) -> String {
    let mut out = String::new();
    for e in log.events() {
        writeln!(out, "{e}").expect("writing to a String");
    }
    out
}
