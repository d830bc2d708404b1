// SPDX-License-Identifier: Apache-2.0

//! Single-pattern matching over stationary graphs, and per-triple histories.

use thiserror::Error;

use crate::log::{ChangeEvent, ChangeLog};
use crate::model::{Edge, Iri, Quintuple, Term, Tick, TimePoint, Triple};
use crate::views::StationaryGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("temporal filters need a quintuple store")]
    TemporalFilterOnStatic,
}

/// `None` positions are wildcards.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pattern {
    pub head: Option<Iri>,
    pub relation: Option<Iri>,
    pub tail: Option<Term>,
    /// Keep edges whose validity interval contains this instant.
    pub valid_at: Option<Tick>,
    /// Keep edges with `valid_until = inf`.
    pub active_only: bool,
}

impl Pattern {
    pub fn any() -> Self {
        Self::default()
    }

    pub fn new(head: Option<Iri>, relation: Option<Iri>, tail: Option<Term>) -> Self {
        Pattern {
            head,
            relation,
            tail,
            ..Self::default()
        }
    }

    pub fn valid_at(mut self, at: Tick) -> Self {
        self.valid_at = Some(at);
        self
    }

    pub fn active_only(mut self) -> Self {
        self.active_only = true;
        self
    }

    fn is_temporal(&self) -> bool {
        self.valid_at.is_some() || self.active_only
    }

    fn unifies(&self, edge: &Triple) -> bool {
        self.head.as_ref().is_none_or(|h| h == &edge.head)
            && self.relation.as_ref().is_none_or(|r| r == &edge.relation)
            && self.tail.as_ref().is_none_or(|t| t == &edge.tail)
    }

    fn unifies_quintuple(&self, q: &Quintuple) -> bool {
        self.head.as_ref().is_none_or(|h| h == q.head())
            && self.relation.as_ref().is_none_or(|r| r == q.relation())
            && self.tail.as_ref().is_none_or(|t| t == q.tail())
            && self.valid_at.is_none_or(|at| {
                q.valid_from() <= TimePoint::Finite(at) && TimePoint::Finite(at) <= q.valid_until()
            })
            && (!self.active_only || q.is_active())
    }
}

/// Every edge of `graph` matching `pattern`, in canonical order.
pub fn match_pattern(graph: &StationaryGraph, pattern: &Pattern) -> Result<Vec<Edge>, QueryError> {
    match graph {
        StationaryGraph::Standard(g) => {
            if pattern.is_temporal() {
                return Err(QueryError::TemporalFilterOnStatic);
            }
            let found: Vec<Edge> = match &pattern.head {
                Some(h) => g
                    .edges_with_head(h)
                    .filter(|e| pattern.unifies(e))
                    .cloned()
                    .map(Edge::Triple)
                    .collect(),
                None => g
                    .edges()
                    .iter()
                    .filter(|e| pattern.unifies(e))
                    .cloned()
                    .map(Edge::Triple)
                    .collect(),
            };
            Ok(found)
        }
        StationaryGraph::Reminiscent(g) => {
            let found: Vec<Edge> = match &pattern.head {
                Some(h) => g
                    .edges_with_head(h)
                    .filter(|q| pattern.unifies_quintuple(q))
                    .cloned()
                    .map(Edge::Quintuple)
                    .collect(),
                None => g
                    .edges()
                    .iter()
                    .filter(|q| pattern.unifies_quintuple(q))
                    .cloned()
                    .map(Edge::Quintuple)
                    .collect(),
            };
            Ok(found)
        }
    }
}

/// Every event touching `key`, in commit order.
pub fn history<'a>(log: &'a ChangeLog, key: &Triple) -> Vec<&'a ChangeEvent> {
    log.events().iter().filter(|e| e.touches(key)).collect()
}
