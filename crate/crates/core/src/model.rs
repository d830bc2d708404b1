// SPDX-License-Identifier: Apache-2.0

//! Timestamps, terms, triples, quintuples and the two stationary graph types.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// A finite instant on the abstract tick axis.
pub type Tick = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(
        "invalid identifier {0:?}: must be non-empty and contain no whitespace, '<', '>' or '\"'"
    )]
    InvalidIdentifier(String),
    #[error("validity interval is inverted: {from} > {until}")]
    InvertedInterval { from: TimePoint, until: TimePoint },
    #[error("validity can only be queried at a finite instant, got {0}")]
    SentinelInstant(TimePoint),
    #[error("semi-reminiscent graph cannot hold an edge closed at {0}")]
    ClosedEdgeInSemiGraph(TimePoint),
}

/// An element of the timestamp closure: a finite tick or one of the two
/// sentinels bounding every tick.
///
/// Variant order gives the total order `NegInf < Finite(_) < PosInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TimePoint {
    NegInf,
    Finite(Tick),
    PosInf,
}

impl TimePoint {
    pub fn is_finite(self) -> bool {
        matches!(self, TimePoint::Finite(_))
    }

    pub fn finite(self) -> Option<Tick> {
        match self {
            TimePoint::Finite(t) => Some(t),
            _ => None,
        }
    }
}

impl From<Tick> for TimePoint {
    fn from(t: Tick) -> Self {
        TimePoint::Finite(t)
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimePoint::NegInf => f.write_str("-inf"),
            TimePoint::Finite(t) => write!(f, "{t}"),
            TimePoint::PosInf => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid time point {0:?}")]
pub struct TimePointParseError(pub String);

impl FromStr for TimePoint {
    type Err = TimePointParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" => Ok(TimePoint::PosInf),
            "-inf" => Ok(TimePoint::NegInf),
            _ => {
                // Reject forms like "+5" or " 5" so that writing is the exact inverse.
                let digits = s.strip_prefix('-').unwrap_or(s);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(TimePointParseError(s.to_owned()));
                }
                s.parse::<Tick>()
                    .map(TimePoint::Finite)
                    .map_err(|_| TimePointParseError(s.to_owned()))
            }
        }
    }
}

impl Serialize for TimePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            TimePoint::Finite(t) => serializer.serialize_i64(*t),
            TimePoint::NegInf => serializer.serialize_str("-inf"),
            TimePoint::PosInf => serializer.serialize_str("inf"),
        }
    }
}

/// Identifier for entities, relations, concepts and datatypes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Iri(String);

impl Iri {
    pub fn new(id: impl Into<String>) -> Result<Self, ModelError> {
        let id = id.into();
        if Self::is_valid(&id) {
            Ok(Iri(id))
        } else {
            Err(ModelError::InvalidIdentifier(id))
        }
    }

    pub fn is_valid(id: &str) -> bool {
        !id.is_empty()
            && !id
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Sorts before every valid identifier; only used as a range bound.
    pub(crate) fn min_bound() -> Self {
        Iri(String::new())
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl FromStr for Iri {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Iri::new(s)
    }
}

/// The tail of an edge: another entity or an attributive literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Entity(Iri),
    Literal { lexical: String, datatype: Iri },
}

impl Term {
    pub fn entity(id: &str) -> Result<Self, ModelError> {
        Iri::new(id).map(Term::Entity)
    }

    pub fn literal(lexical: impl Into<String>, datatype: &str) -> Result<Self, ModelError> {
        Ok(Term::Literal {
            lexical: lexical.into(),
            datatype: Iri::new(datatype)?,
        })
    }

    pub fn as_entity(&self) -> Option<&Iri> {
        match self {
            Term::Entity(iri) => Some(iri),
            Term::Literal { .. } => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Entity(iri) => iri.fmt(f),
            Term::Literal { lexical, datatype } => {
                f.write_str("\"")?;
                for c in lexical.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                write!(f, "\"^^{datatype}")
            }
        }
    }
}

/// A timestamp-free edge `(head, relation, tail)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple {
    pub head: Iri,
    pub relation: Iri,
    pub tail: Term,
}

impl Triple {
    pub fn new(head: Iri, relation: Iri, tail: Term) -> Self {
        Triple {
            head,
            relation,
            tail,
        }
    }

    /// Smallest possible triple with the given head.
    pub(crate) fn lower_bound(head: &Iri) -> Self {
        Triple {
            head: head.clone(),
            relation: Iri::min_bound(),
            tail: Term::Entity(Iri::min_bound()),
        }
    }

    pub fn entities(&self) -> impl Iterator<Item = &Iri> {
        std::iter::once(&self.head).chain(self.tail.as_entity())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.head, self.relation, self.tail)
    }
}

/// An edge annotated with its closed validity interval `[valid_from, valid_until]`.
///
/// Field order matches the canonical sort order
/// `(head, relation, tail, valid_from, valid_until)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Quintuple {
    head: Iri,
    relation: Iri,
    tail: Term,
    valid_from: TimePoint,
    valid_until: TimePoint,
}

impl Quintuple {
    /// Builds a quintuple, rejecting `valid_from > valid_until`.
    pub fn new(
        triple: Triple,
        valid_from: TimePoint,
        valid_until: TimePoint,
    ) -> Result<Self, ModelError> {
        if valid_from > valid_until {
            return Err(ModelError::InvertedInterval {
                from: valid_from,
                until: valid_until,
            });
        }
        Ok(Self::new_unchecked(triple, valid_from, valid_until))
    }

    /// Builds a quintuple without checking interval order.
    ///
    /// Ingest paths use this so that an inverted interval is reported by the
    /// ORDER rule during validation instead of failing the whole load.
    pub fn new_unchecked(triple: Triple, valid_from: TimePoint, valid_until: TimePoint) -> Self {
        let Triple {
            head,
            relation,
            tail,
        } = triple;
        Quintuple {
            head,
            relation,
            tail,
            valid_from,
            valid_until,
        }
    }

    /// Wraps a triple with the unbounded interval `[-inf, inf]`.
    pub fn unbounded(triple: Triple) -> Self {
        Self::new_unchecked(triple, TimePoint::NegInf, TimePoint::PosInf)
    }

    pub fn head(&self) -> &Iri {
        &self.head
    }

    pub fn relation(&self) -> &Iri {
        &self.relation
    }

    pub fn tail(&self) -> &Term {
        &self.tail
    }

    pub fn valid_from(&self) -> TimePoint {
        self.valid_from
    }

    pub fn valid_until(&self) -> TimePoint {
        self.valid_until
    }

    pub fn is_well_ordered(&self) -> bool {
        self.valid_from <= self.valid_until
    }

    /// Still valid with no known end.
    pub fn is_active(&self) -> bool {
        self.valid_until == TimePoint::PosInf
    }

    /// Projection onto `(head, relation, tail)`.
    pub fn triple(&self) -> Triple {
        Triple::new(self.head.clone(), self.relation.clone(), self.tail.clone())
    }

    pub fn same_triple(&self, key: &Triple) -> bool {
        self.head == key.head && self.relation == key.relation && self.tail == key.tail
    }

    pub fn into_triple(self) -> Triple {
        Triple::new(self.head, self.relation, self.tail)
    }

    pub fn with_valid_until(&self, valid_until: TimePoint) -> Self {
        Quintuple {
            valid_until,
            ..self.clone()
        }
    }

    /// `valid_from <= at <= valid_until`; `at` must be finite.
    pub fn is_valid_at(&self, at: TimePoint) -> Result<bool, ModelError> {
        if !at.is_finite() {
            return Err(ModelError::SentinelInstant(at));
        }
        Ok(self.valid_from <= at && at <= self.valid_until)
    }

    /// Closed-interval intersection. Inverted intervals are empty.
    pub fn overlaps(&self, other: &Quintuple) -> bool {
        self.is_well_ordered()
            && other.is_well_ordered()
            && self.valid_from <= other.valid_until
            && other.valid_from <= self.valid_until
    }

    pub(crate) fn lower_bound(head: &Iri) -> Self {
        Self::unbounded(Triple::lower_bound(head))
    }

    pub fn entities(&self) -> impl Iterator<Item = &Iri> {
        std::iter::once(&self.head).chain(self.tail.as_entity())
    }
}

impl fmt::Display for Quintuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.head, self.relation, self.tail, self.valid_from, self.valid_until
        )
    }
}

/// Either kind of edge, as reported by queries, diffs and violations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum Edge {
    Triple(Triple),
    Quintuple(Quintuple),
}

impl Edge {
    pub fn triple(&self) -> Triple {
        match self {
            Edge::Triple(t) => t.clone(),
            Edge::Quintuple(q) => q.triple(),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edge::Triple(t) => t.fmt(f),
            Edge::Quintuple(q) => q.fmt(f),
        }
    }
}

impl From<Triple> for Edge {
    fn from(t: Triple) -> Self {
        Edge::Triple(t)
    }
}

impl From<Quintuple> for Edge {
    fn from(q: Quintuple) -> Self {
        Edge::Quintuple(q)
    }
}

/// A stationary set of triples. Entities are the endpoints of the edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StandardKG {
    edges: BTreeSet<Triple>,
}

impl StandardKG {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if the edge was already present.
    pub fn insert(&mut self, edge: Triple) -> bool {
        self.edges.insert(edge)
    }

    pub fn remove(&mut self, edge: &Triple) -> bool {
        self.edges.remove(edge)
    }

    pub fn contains(&self, edge: &Triple) -> bool {
        self.edges.contains(edge)
    }

    pub fn edges(&self) -> &BTreeSet<Triple> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn entities(&self) -> BTreeSet<Iri> {
        self.edges
            .iter()
            .flat_map(|e| e.entities().cloned())
            .collect()
    }

    /// Edges with the given head, in canonical order.
    pub fn edges_with_head<'a>(&'a self, head: &'a Iri) -> impl Iterator<Item = &'a Triple> + 'a {
        self.edges
            .range(Triple::lower_bound(head)..)
            .take_while(move |e| &e.head == head)
    }
}

impl FromIterator<Triple> for StandardKG {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        StandardKG {
            edges: iter.into_iter().collect(),
        }
    }
}

/// A stationary set of quintuples.
///
/// With `semi` set, the graph only ever holds active edges
/// (`valid_until = inf`); inserting anything else fails.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReminiscentKG {
    edges: BTreeSet<Quintuple>,
    semi: bool,
}

impl ReminiscentKG {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_semi() -> Self {
        ReminiscentKG {
            edges: BTreeSet::new(),
            semi: true,
        }
    }

    /// Returns `Ok(false)` for an exact duplicate, which is not inserted.
    pub fn insert(&mut self, edge: Quintuple) -> Result<bool, ModelError> {
        if self.semi && !edge.is_active() {
            return Err(ModelError::ClosedEdgeInSemiGraph(edge.valid_until));
        }
        Ok(self.edges.insert(edge))
    }

    pub fn remove(&mut self, edge: &Quintuple) -> bool {
        self.edges.remove(edge)
    }

    pub fn contains(&self, edge: &Quintuple) -> bool {
        self.edges.contains(edge)
    }

    pub fn is_semi(&self) -> bool {
        self.semi
    }

    pub fn edges(&self) -> &BTreeSet<Quintuple> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn entities(&self) -> BTreeSet<Iri> {
        self.edges
            .iter()
            .flat_map(|e| e.entities().cloned())
            .collect()
    }

    pub fn edges_with_head<'a>(
        &'a self,
        head: &'a Iri,
    ) -> impl Iterator<Item = &'a Quintuple> + 'a {
        self.edges
            .range(Quintuple::lower_bound(head)..)
            .take_while(move |e| &e.head == head)
    }

    /// Every interval recorded for `key`, in canonical order.
    pub fn with_triple<'a>(&'a self, key: &'a Triple) -> impl Iterator<Item = &'a Quintuple> + 'a {
        self.edges
            .range(Quintuple::new_unchecked(key.clone(), TimePoint::NegInf, TimePoint::NegInf)..)
            .take_while(move |e| e.same_triple(key))
    }

    pub fn contains_triple(&self, key: &Triple) -> bool {
        self.with_triple(key).next().is_some()
    }

    /// Edgewise projection onto triples. Quintuples sharing a triple collapse.
    pub fn project(&self) -> StandardKG {
        self.edges.iter().map(Quintuple::triple).collect()
    }

    /// True iff every edge is still active.
    pub fn is_semi_reminiscent(&self) -> bool {
        self.edges.iter().all(Quintuple::is_active)
    }
}

impl FromIterator<Quintuple> for ReminiscentKG {
    fn from_iter<I: IntoIterator<Item = Quintuple>>(iter: I) -> Self {
        ReminiscentKG {
            edges: iter.into_iter().collect(),
            semi: false,
        }
    }
}
