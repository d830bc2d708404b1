// SPDX-License-Identifier: Apache-2.0

//! Stationary images of a change log: mutable, semi-incremental and
//! incremental snapshots, plus the reconstruction and diff operations built
//! on top of them.
//!
//! A snapshot at `at` folds every event with `commit_time <= at`, so the
//! dynamic graph is a step function that only changes at commit times.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::log::{Action, ChangeEvent, ChangeLog};
use crate::model::{Edge, Quintuple, ReminiscentKG, StandardKG, Tick, TimePoint, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViewKind {
    /// Standard KGs: active facts without timestamps.
    Mutable,
    /// Reminiscent KGs holding only active facts.
    SemiIncremental,
    /// Reminiscent KGs that keep closed facts with their end of validity.
    Incremental,
}

impl ViewKind {
    pub const ALL: [ViewKind; 3] = [
        ViewKind::Mutable,
        ViewKind::SemiIncremental,
        ViewKind::Incremental,
    ];
}

impl fmt::Display for ViewKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViewKind::Mutable => "mutable",
            ViewKind::SemiIncremental => "semi-incremental",
            ViewKind::Incremental => "incremental",
        })
    }
}

impl FromStr for ViewKind {
    type Err = ViewError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mutable" => Ok(ViewKind::Mutable),
            "semi-incremental" => Ok(ViewKind::SemiIncremental),
            "incremental" => Ok(ViewKind::Incremental),
            _ => Err(ViewError::UnknownKind(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ViewError {
    #[error("unknown view kind {0:?}")]
    UnknownKind(String),
    #[error("deletion time is undefined for {0} views: closed edges are kept")]
    UnsupportedKind(ViewKind),
    #[error("diff range is reversed: {from} > {to}")]
    BadRange { from: Tick, to: Tick },
}

/// A standard or reminiscent KG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum StationaryGraph {
    Standard(StandardKG),
    Reminiscent(ReminiscentKG),
}

impl StationaryGraph {
    pub fn len(&self) -> usize {
        match self {
            StationaryGraph::Standard(g) => g.len(),
            StationaryGraph::Reminiscent(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All edges in canonical order.
    pub fn edges(&self) -> Box<dyn Iterator<Item = Edge> + '_> {
        match self {
            StationaryGraph::Standard(g) => Box::new(g.edges().iter().cloned().map(Edge::Triple)),
            StationaryGraph::Reminiscent(g) => {
                Box::new(g.edges().iter().cloned().map(Edge::Quintuple))
            }
        }
    }

    /// Whether any edge projects to `key`.
    pub fn contains_triple(&self, key: &Triple) -> bool {
        match self {
            StationaryGraph::Standard(g) => g.contains(key),
            StationaryGraph::Reminiscent(g) => g.contains_triple(key),
        }
    }
}

/// The value of the dynamic graph at one instant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Snapshot {
    pub kind: ViewKind,
    pub at: Tick,
    pub graph: StationaryGraph,
}

/// Folds events into one kind of stationary image.
#[derive(Debug, Clone)]
pub struct Replayer {
    kind: ViewKind,
    graph: StationaryGraph,
}

impl Replayer {
    pub fn new(kind: ViewKind) -> Self {
        let graph = match kind {
            ViewKind::Mutable => StationaryGraph::Standard(StandardKG::new()),
            ViewKind::SemiIncremental => StationaryGraph::Reminiscent(ReminiscentKG::new_semi()),
            ViewKind::Incremental => StationaryGraph::Reminiscent(ReminiscentKG::new()),
        };
        Replayer { kind, graph }
    }

    pub fn kind(&self) -> ViewKind {
        self.kind
    }

    pub fn graph(&self) -> &StationaryGraph {
        &self.graph
    }

    pub fn into_graph(self) -> StationaryGraph {
        self.graph
    }

    /// Applies one event from an accepted log.
    pub fn apply(&mut self, event: &ChangeEvent) {
        match &mut self.graph {
            StationaryGraph::Standard(g) => match &event.action {
                Action::Assert { edge } if edge.is_active() => {
                    g.insert(edge.triple());
                }
                Action::Assert { .. } => {}
                Action::Close { key, .. } | Action::Retract { key } => {
                    g.remove(key);
                }
            },
            StationaryGraph::Reminiscent(g) => {
                let retain_closed = self.kind == ViewKind::Incremental;
                match &event.action {
                    Action::Assert { edge } => {
                        if retain_closed || edge.is_active() {
                            g.insert(edge.clone())
                                .expect("only active edges reach semi views");
                        }
                    }
                    Action::Close { key, valid_until } => {
                        if let Some(old) = active_edge(g, key) {
                            g.remove(&old);
                            if retain_closed {
                                g.insert(old.with_valid_until(TimePoint::Finite(*valid_until)))
                                    .expect("incremental graph is not semi");
                            }
                        }
                    }
                    Action::Retract { key } => {
                        if let Some(old) = active_edge(g, key) {
                            g.remove(&old);
                        }
                    }
                }
            }
        }
    }

    pub fn apply_all<'a, I: IntoIterator<Item = &'a ChangeEvent>>(&mut self, events: I) {
        for e in events {
            self.apply(e);
        }
    }
}

fn active_edge(g: &ReminiscentKG, key: &Triple) -> Option<Quintuple> {
    g.with_triple(key).find(|q| q.is_active()).cloned()
}

/// The stationary image of `log` at `at`. Before the first commit the graph
/// is empty.
pub fn snapshot(log: &ChangeLog, kind: ViewKind, at: Tick) -> Snapshot {
    let mut replayer = Replayer::new(kind);
    replayer.apply_all(log.events_until(at));
    Snapshot {
        kind,
        at,
        graph: replayer.into_graph(),
    }
}

/// Every stationary image of `log`, one per commit time, in order.
pub fn snapshots_at_commits(log: &ChangeLog, kind: ViewKind) -> Vec<Snapshot> {
    let mut out = Vec::new();
    for_each_commit(log, kind, |at, graph| {
        out.push(Snapshot {
            kind,
            at,
            graph: graph.clone(),
        })
    });
    out
}

/// Calls `f` with the image after each commit time, replaying the log once.
pub fn for_each_commit<F>(log: &ChangeLog, kind: ViewKind, mut f: F)
where
    F: FnMut(Tick, &StationaryGraph),
{
    let mut replayer = Replayer::new(kind);
    let events = log.events();
    let mut i = 0;
    while i < events.len() {
        let at = events[i].commit_time;
        while i < events.len() && events[i].commit_time == at {
            replayer.apply(&events[i]);
            i += 1;
        }
        f(at, replayer.graph());
    }
}

/// Earliest commit time of an ASSERT of `key`.
pub fn accessibility_time(log: &ChangeLog, key: &Triple) -> Option<Tick> {
    log.events().iter().find_map(|e| match &e.action {
        Action::Assert { edge } if edge.same_triple(key) => Some(e.commit_time),
        _ => None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "at", rename_all = "snake_case")]
pub enum DeletionTime {
    Deleted(Tick),
    StillPresent,
    NotFound,
}

/// First commit time at which `key` is missing from the `kind` image after
/// being present at the previous commit time.
pub fn deletion_time(
    log: &ChangeLog,
    key: &Triple,
    kind: ViewKind,
) -> Result<DeletionTime, ViewError> {
    if kind == ViewKind::Incremental {
        return Err(ViewError::UnsupportedKind(kind));
    }
    let mut seen = false;
    let mut present_before = false;
    let mut deleted = None;
    for_each_commit(log, kind, |at, graph| {
        if deleted.is_some() {
            return;
        }
        let present = graph.contains_triple(key);
        if present_before && !present {
            deleted = Some(at);
        }
        seen |= present;
        present_before = present;
    });
    Ok(match deleted {
        Some(at) => DeletionTime::Deleted(at),
        None if seen => DeletionTime::StillPresent,
        None => DeletionTime::NotFound,
    })
}

/// Edge-set changes between two images of the same kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SnapshotDiff {
    pub added: BTreeSet<Edge>,
    pub removed: BTreeSet<Edge>,
    /// `(before, after)` pairs of an active edge that was closed.
    pub rewritten: Vec<(Quintuple, Quintuple)>,
}

impl SnapshotDiff {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty() && self.rewritten.is_empty()
    }
}

/// Differences between the `kind` images at `from` and `to`.
///
/// For incremental views a removed active edge and an added closed edge with
/// the same triple and start are reported as one rewrite.
pub fn diff(
    log: &ChangeLog,
    kind: ViewKind,
    from: Tick,
    to: Tick,
) -> Result<SnapshotDiff, ViewError> {
    if from > to {
        return Err(ViewError::BadRange { from, to });
    }
    let mut replayer = Replayer::new(kind);
    let early = log.events_until(from);
    replayer.apply_all(early);
    let before = replayer.graph().clone();
    replayer.apply_all(&log.events_until(to)[early.len()..]);
    Ok(diff_graphs(&before, replayer.graph()))
}

/// Set differences between two stationary graphs of the same shape.
pub fn diff_graphs(before: &StationaryGraph, after: &StationaryGraph) -> SnapshotDiff {
    let old: BTreeSet<Edge> = before.edges().collect();
    let new: BTreeSet<Edge> = after.edges().collect();
    let mut removed: BTreeSet<Edge> = old.difference(&new).cloned().collect();
    let mut added: BTreeSet<Edge> = new.difference(&old).cloned().collect();
    let mut rewritten = Vec::new();
    if matches!(after, StationaryGraph::Reminiscent(g) if !g.is_semi()) {
        // Keyed by (triple, start); the earliest end wins a tie.
        let mut closed: HashMap<(Triple, TimePoint), Quintuple> = HashMap::new();
        for e in &added {
            if let Edge::Quintuple(q) = e {
                if !q.is_active() {
                    closed
                        .entry((q.triple(), q.valid_from()))
                        .or_insert_with(|| q.clone());
                }
            }
        }
        let opened: Vec<Quintuple> = removed
            .iter()
            .filter_map(|e| match e {
                Edge::Quintuple(q) if q.is_active() => Some(q.clone()),
                _ => None,
            })
            .collect();
        // At most one active edge per triple, so each key pairs at most once.
        for old in opened {
            if let Some(new) = closed.remove(&(old.triple(), old.valid_from())) {
                removed.remove(&Edge::Quintuple(old.clone()));
                added.remove(&Edge::Quintuple(new.clone()));
                rewritten.push((old, new));
            }
        }
    }
    SnapshotDiff {
        added,
        removed,
        rewritten,
    }
}

/// Cells of the time-aware KG taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaxonomyCell {
    Standard,
    Reminiscent,
    SemiReminiscent,
    Mutable,
    Incremental,
    SemiIncremental,
}

impl fmt::Display for TaxonomyCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaxonomyCell::Standard => "standard",
            TaxonomyCell::Reminiscent => "reminiscent",
            TaxonomyCell::SemiReminiscent => "semi-reminiscent",
            TaxonomyCell::Mutable => "mutable",
            TaxonomyCell::Incremental => "incremental",
            TaxonomyCell::SemiIncremental => "semi-incremental",
        })
    }
}

/// Places a store or log in the most informative taxonomy cell its data
/// supports.
pub trait Classify {
    fn classify(&self) -> TaxonomyCell;
}

impl Classify for StandardKG {
    fn classify(&self) -> TaxonomyCell {
        TaxonomyCell::Standard
    }
}

impl Classify for ReminiscentKG {
    fn classify(&self) -> TaxonomyCell {
        if self.is_semi_reminiscent() {
            TaxonomyCell::SemiReminiscent
        } else {
            TaxonomyCell::Reminiscent
        }
    }
}

impl Classify for StationaryGraph {
    fn classify(&self) -> TaxonomyCell {
        match self {
            StationaryGraph::Standard(g) => g.classify(),
            StationaryGraph::Reminiscent(g) => g.classify(),
        }
    }
}

/// A log that records ends of validity (a CLOSE, or an asserted finite end)
/// is incremental. Otherwise, one whose asserted edges carry a start time is
/// semi-incremental. A log of unbounded asserts and retracts loses nothing
/// under projection and is mutable.
impl Classify for ChangeLog {
    fn classify(&self) -> TaxonomyCell {
        let mut has_start = false;
        for e in self.events() {
            match &e.action {
                Action::Close { .. } => return TaxonomyCell::Incremental,
                Action::Assert { edge } if !edge.is_active() => return TaxonomyCell::Incremental,
                Action::Assert { edge } => has_start |= edge.valid_from() != TimePoint::NegInf,
                Action::Retract { .. } => {}
            }
        }
        if has_start {
            TaxonomyCell::SemiIncremental
        } else {
            TaxonomyCell::Mutable
        }
    }
}
