// SPDX-License-Identifier: Apache-2.0

//! The append-only change log every dynamic view is replayed from.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Quintuple, ReminiscentKG, Tick, TimePoint, Triple};
use crate::ontology::TemporalOntology;
use crate::validate::{violations_after_change, Change, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    /// A fact becomes accessible.
    Assert { edge: Quintuple },
    /// The active fact for `key` stops being valid at `valid_until`; it stays
    /// in the incremental view as history.
    Close { key: Triple, valid_until: Tick },
    /// The active fact for `key` was erroneous and leaves every view.
    Retract { key: Triple },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ChangeEvent {
    pub commit_time: Tick,
    #[serde(flatten)]
    pub action: Action,
}

impl ChangeEvent {
    pub fn assert(commit_time: Tick, edge: Quintuple) -> Self {
        ChangeEvent {
            commit_time,
            action: Action::Assert { edge },
        }
    }

    pub fn close(commit_time: Tick, key: Triple, valid_until: Tick) -> Self {
        ChangeEvent {
            commit_time,
            action: Action::Close { key, valid_until },
        }
    }

    pub fn retract(commit_time: Tick, key: Triple) -> Self {
        ChangeEvent {
            commit_time,
            action: Action::Retract { key },
        }
    }

    /// The `(head, relation, tail)` this event touches.
    pub fn key(&self) -> Triple {
        match &self.action {
            Action::Assert { edge } => edge.triple(),
            Action::Close { key, .. } | Action::Retract { key } => key.clone(),
        }
    }

    pub fn touches(&self, key: &Triple) -> bool {
        match &self.action {
            Action::Assert { edge } => edge.same_triple(key),
            Action::Close { key: k, .. } | Action::Retract { key: k } => k == key,
        }
    }
}

/// Same line format as the event-log file, without the trailing newline.
impl fmt::Display for ChangeEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.action {
            Action::Assert { edge } => write!(f, "{} ASSERT {edge}", self.commit_time),
            Action::Close { key, valid_until } => {
                write!(f, "{} CLOSE {key} {valid_until}", self.commit_time)
            }
            Action::Retract { key } => write!(f, "{} RETRACT {key}", self.commit_time),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppendError {
    #[error("commit {commit} is before the last commit {last}")]
    OutOfOrderCommit { commit: Tick, last: Tick },
    #[error("commit {commit} does not follow the previous change to {key} at {last}")]
    SameTripleNotIncreasing {
        key: Triple,
        commit: Tick,
        last: Tick,
    },
    #[error("no active edge for {key}")]
    NoActiveEdge { key: Triple },
    #[error("edge {edge} already exists")]
    DuplicateAssert { edge: Box<Quintuple> },
    #[error("{} rule violation(s)", .0.len())]
    RuleViolation(Vec<Violation>),
}

/// A strictly commit-ordered sequence of change events under one ontology.
///
/// Every accepted prefix replays to a rule-clean incremental graph. A triple
/// has at most one active (`valid_until = inf`) quintuple at any time.
#[derive(Debug, Clone)]
pub struct ChangeLog {
    ontology: TemporalOntology,
    events: Vec<ChangeEvent>,
    // Incremental graph after the last event.
    state: ReminiscentKG,
    last_touch: HashMap<Triple, Tick>,
}

impl PartialEq for ChangeLog {
    fn eq(&self, other: &Self) -> bool {
        self.ontology == other.ontology && self.events == other.events
    }
}

impl Eq for ChangeLog {}

impl ChangeLog {
    pub fn new(ontology: TemporalOntology) -> Self {
        ChangeLog {
            ontology,
            events: Vec::new(),
            state: ReminiscentKG::new(),
            last_touch: HashMap::new(),
        }
    }

    /// Appends each event in turn; stops at the first rejected one and
    /// reports its index.
    pub fn from_events<I>(
        ontology: TemporalOntology,
        events: I,
    ) -> Result<Self, (usize, AppendError)>
    where
        I: IntoIterator<Item = ChangeEvent>,
    {
        let mut log = ChangeLog::new(ontology);
        for (i, e) in events.into_iter().enumerate() {
            log.append(e).map_err(|err| (i, err))?;
        }
        Ok(log)
    }

    /// Validates `event` against the current state and appends it. On error
    /// the log is unchanged.
    pub fn append(&mut self, event: ChangeEvent) -> Result<(), AppendError> {
        if let Some(last) = self.last_commit() {
            if event.commit_time < last {
                return Err(AppendError::OutOfOrderCommit {
                    commit: event.commit_time,
                    last,
                });
            }
        }
        let key = event.key();
        if let Some(&last) = self.last_touch.get(&key) {
            if event.commit_time <= last {
                return Err(AppendError::SameTripleNotIncreasing {
                    key,
                    commit: event.commit_time,
                    last,
                });
            }
        }

        let active = self
            .state
            .with_triple(&key)
            .find(|q| q.is_active())
            .cloned();
        match &event.action {
            Action::Assert { edge } => {
                if self.state.contains(edge) || (edge.is_active() && active.is_some()) {
                    return Err(AppendError::DuplicateAssert {
                        edge: Box::new(edge.clone()),
                    });
                }
                self.state
                    .insert(edge.clone())
                    .expect("incremental graph is not semi");
                let found =
                    violations_after_change(&self.state, &self.ontology, Change::Added(edge));
                if !found.is_empty() {
                    self.state.remove(edge);
                    return Err(AppendError::RuleViolation(found));
                }
            }
            Action::Close { valid_until, .. } => {
                let old = active.ok_or_else(|| AppendError::NoActiveEdge { key: key.clone() })?;
                let new = old.with_valid_until(TimePoint::Finite(*valid_until));
                if self.state.contains(&new) {
                    return Err(AppendError::DuplicateAssert {
                        edge: Box::new(new),
                    });
                }
                self.state.remove(&old);
                self.state
                    .insert(new.clone())
                    .expect("incremental graph is not semi");
                let found =
                    violations_after_change(&self.state, &self.ontology, Change::Rewritten(&new));
                if !found.is_empty() {
                    self.state.remove(&new);
                    self.state
                        .insert(old)
                        .expect("incremental graph is not semi");
                    return Err(AppendError::RuleViolation(found));
                }
            }
            Action::Retract { .. } => {
                let old = active.ok_or_else(|| AppendError::NoActiveEdge { key: key.clone() })?;
                self.state.remove(&old);
                let found =
                    violations_after_change(&self.state, &self.ontology, Change::Removed(&old));
                if !found.is_empty() {
                    self.state
                        .insert(old)
                        .expect("incremental graph is not semi");
                    return Err(AppendError::RuleViolation(found));
                }
            }
        }
        self.last_touch.insert(key, event.commit_time);
        self.events.push(event);
        Ok(())
    }

    pub fn ontology(&self) -> &TemporalOntology {
        &self.ontology
    }

    pub fn events(&self) -> &[ChangeEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn last_commit(&self) -> Option<Tick> {
        self.events.last().map(|e| e.commit_time)
    }

    /// Events with `commit_time <= at`.
    pub fn events_until(&self, at: Tick) -> &[ChangeEvent] {
        let end = self.events.partition_point(|e| e.commit_time <= at);
        &self.events[..end]
    }

    /// Distinct commit times in ascending order: the domain of the dynamic graph.
    pub fn commit_times(&self) -> Vec<Tick> {
        let mut times: Vec<Tick> = self.events.iter().map(|e| e.commit_time).collect();
        times.dedup();
        times
    }

    /// The incremental graph after the last event.
    pub fn current(&self) -> &ReminiscentKG {
        &self.state
    }
}
