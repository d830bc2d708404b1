// SPDX-License-Identifier: Apache-2.0

//! Temporal knowledge graphs built from an append-only change log.
//!
//! A [`ChangeLog`] records ASSERT, CLOSE and RETRACT events under a
//! [`TemporalOntology`]. Replaying it gives three views: a mutable triple
//! store, a semi-reminiscent store of active facts and a reminiscent store
//! that keeps closed facts as history.
//!
//! ```
//! use chronokg_core::{parse_event_log, snapshot, TemporalOntology, ViewKind};
//! use chronokg_core::{Iri, StaticOntology};
//!
//! let mut base = StaticOntology::new(Iri::new("type").unwrap());
//! base.declare_relation(Iri::new("member").unwrap());
//! let log = parse_event_log(
//!     "2012 ASSERT <UK> <member> <EU> 1973 inf\n2021 CLOSE <UK> <member> <EU> 2020\n",
//!     TemporalOntology::new(base),
//! )
//! .unwrap();
//! assert_eq!(snapshot(&log, ViewKind::Mutable, 2021).graph.len(), 0);
//! assert_eq!(snapshot(&log, ViewKind::Incremental, 2021).graph.len(), 1);
//! ```

pub mod generate;
pub mod log;
pub mod model;
pub mod ontology;
pub mod query;
pub mod serialize;
pub mod validate;
pub mod views;

pub use log::{Action, AppendError, ChangeEvent, ChangeLog};
pub use model::{
    Edge, Iri, ModelError, Quintuple, ReminiscentKG, StandardKG, Term, Tick, TimePoint, Triple,
};
pub use ontology::{OntologyError, Rule, StaticOntology, TemporalOntology, TemporalRule};
pub use query::{history, match_pattern, Pattern, QueryError};
pub use serialize::{
    build_event_log, parse_event_log, parse_events, parse_graph, parse_ontology, parse_quintuples,
    parse_term, parse_triples, write_event_log, write_graph, write_ontology, write_quintuples,
    write_triples, LineAppendError, LoadError, ParseError, ParseErrorKind,
};
pub use validate::{validate_reminiscent, validate_standard, ViolatedRule, Violation};
pub use views::{
    accessibility_time, deletion_time, diff, diff_graphs, for_each_commit, snapshot,
    snapshots_at_commits, Classify, DeletionTime, Replayer, Snapshot, SnapshotDiff,
    StationaryGraph, TaxonomyCell, ViewError, ViewKind,
};
