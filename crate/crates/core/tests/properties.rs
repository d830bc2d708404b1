// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use chronokg_core::generate::{plain_ontology, random_log, LogParams};
use chronokg_core::{
    history, match_pattern, parse_event_log, parse_events, parse_graph, parse_ontology,
    parse_quintuples, parse_triples, snapshot, write_quintuples, write_triples, ChangeLog, Edge,
    Iri, Pattern, Quintuple, ReminiscentKG, Replayer, StandardKG, StationaryGraph, Term, TimePoint,
    Triple, ViewKind,
};
use common::{edge_set, naive_edges};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn log_from(seed: u64, events: usize, retract: bool) -> ChangeLog {
    let p = LogParams {
        events,
        entities: 5,
        relations: 2,
        allow_retract: retract,
        ..LogParams::default()
    };
    random_log(&mut ChaCha8Rng::seed_from_u64(seed), plain_ontology(2), &p)
}

fn kind() -> impl Strategy<Value = ViewKind> {
    prop::sample::select(ViewKind::ALL.to_vec())
}

fn iri() -> impl Strategy<Value = Iri> {
    "[A-Za-z0-9_:/#.?=&é-]{1,12}".prop_map(|s| Iri::new(s).unwrap())
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        iri().prop_map(Term::Entity),
        (any::<String>(), iri())
            .prop_map(|(lexical, datatype)| Term::Literal { lexical, datatype }),
    ]
}

fn triple() -> impl Strategy<Value = Triple> {
    (iri(), iri(), term()).prop_map(|(h, r, t)| Triple::new(h, r, t))
}

fn timepoint() -> impl Strategy<Value = TimePoint> {
    prop_oneof![
        Just(TimePoint::NegInf),
        Just(TimePoint::PosInf),
        any::<i64>().prop_map(TimePoint::Finite),
    ]
}

fn quintuple() -> impl Strategy<Value = Quintuple> {
    (triple(), timepoint(), timepoint())
        .prop_map(|(t, a, b)| Quintuple::new(t, a.min(b), a.max(b)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn replay_matches_the_definitions(seed in any::<u64>(), events in 0usize..80, kind in kind()) {
        let log = log_from(seed, events, true);
        for t in log.commit_times() {
            prop_assert_eq!(edge_set(&snapshot(&log, kind, t).graph), naive_edges(&log, kind, t));
        }
    }

    #[test]
    fn projection_tower(seed in any::<u64>(), events in 0usize..80) {
        let log = log_from(seed, events, true);
        for t in log.commit_times() {
            let semi = snapshot(&log, ViewKind::SemiIncremental, t).graph;
            let projected: BTreeSet<Edge> = semi.edges().map(|e| Edge::Triple(e.triple())).collect();
            prop_assert_eq!(projected, edge_set(&snapshot(&log, ViewKind::Mutable, t).graph));
            let active: BTreeSet<Edge> = snapshot(&log, ViewKind::Incremental, t)
                .graph
                .edges()
                .filter(|e| matches!(e, Edge::Quintuple(q) if q.is_active()))
                .collect();
            prop_assert_eq!(active, edge_set(&semi));
        }
    }

    #[test]
    fn incremental_images_only_grow_without_retracts(seed in any::<u64>(), events in 0usize..80) {
        let log = log_from(seed, events, false);
        let mut prev = 0;
        for t in log.commit_times() {
            let n = snapshot(&log, ViewKind::Incremental, t).graph.len();
            prop_assert!(n >= prev);
            prev = n;
        }
    }

    /// Images are constant between commits and empty before the first.
    #[test]
    fn step_semantics(seed in any::<u64>(), events in 1usize..60, kind in kind(), offset in 0i64..3) {
        let log = log_from(seed, events, true);
        let times = log.commit_times();
        prop_assume!(!times.is_empty());
        prop_assert!(snapshot(&log, kind, times[0] - 1 - offset).graph.is_empty());
        for w in times.windows(2) {
            let at = (w[0] + offset).min(w[1] - 1);
            prop_assert_eq!(
                edge_set(&snapshot(&log, kind, at).graph),
                edge_set(&snapshot(&log, kind, w[0]).graph)
            );
        }
    }

    /// Each triple's edges come from its own history alone.
    #[test]
    fn history_replays_to_the_same_edges(seed in any::<u64>(), events in 0usize..80, kind in kind()) {
        let log = log_from(seed, events, true);
        let full = edge_set(&snapshot(&log, kind, i64::MAX).graph);
        let keys: BTreeSet<Triple> = log.events().iter().map(|e| e.key()).collect();
        for key in keys {
            let mut r = Replayer::new(kind);
            r.apply_all(history(&log, &key));
            let own = edge_set(r.graph());
            let want: BTreeSet<Edge> = full.iter().filter(|e| e.triple() == key).cloned().collect();
            prop_assert_eq!(own, want);
        }
    }

    /// A temporal filter is the plain match followed by the filter.
    #[test]
    fn filters_compose(seed in any::<u64>(), events in 0usize..80, at in 0i64..200, head in 0usize..6) {
        let log = log_from(seed, events, true);
        let graph = snapshot(&log, ViewKind::Incremental, i64::MAX).graph;
        let mut base = Pattern::any();
        if head < 5 {
            base.head = Some(Iri::new(format!("e{head}")).unwrap());
        }
        let plain = match_pattern(&graph, &base).unwrap();
        let at_t = match_pattern(&graph, &base.clone().valid_at(at)).unwrap();
        let want: Vec<Edge> = plain
            .iter()
            .filter(|e| matches!(e, Edge::Quintuple(q) if q.is_valid_at(at.into()).unwrap()))
            .cloned()
            .collect();
        prop_assert_eq!(&at_t, &want);
        let both = match_pattern(&graph, &base.clone().valid_at(at).active_only()).unwrap();
        let want: Vec<Edge> = want
            .into_iter()
            .filter(|e| matches!(e, Edge::Quintuple(q) if q.is_active()))
            .collect();
        prop_assert_eq!(both, want);
    }

    #[test]
    fn triples_round_trip(edges in prop::collection::vec(triple(), 0..20)) {
        let g: StandardKG = edges.into_iter().collect();
        prop_assert_eq!(parse_triples(&write_triples(&g)).unwrap(), g);
    }

    #[test]
    fn quintuples_round_trip(edges in prop::collection::vec(quintuple(), 0..20)) {
        let g: ReminiscentKG = edges.into_iter().collect();
        let text = write_quintuples(&g);
        prop_assert_eq!(parse_quintuples(&text).unwrap(), g.clone());
        match parse_graph(&text).unwrap() {
            StationaryGraph::Reminiscent(back) => prop_assert_eq!(back, g),
            StationaryGraph::Standard(back) => prop_assert!(g.is_empty() && back.is_empty()),
        }
    }

    #[test]
    fn timepoints_round_trip(t in timepoint()) {
        prop_assert_eq!(t.to_string().parse::<TimePoint>().unwrap(), t);
    }

    /// Readers never panic, and errors point inside the input.
    #[test]
    fn parse_errors_are_total(text in "([<>\"^. #a-z0-9\\\\\t-]|inf|ASSERT|CLOSE|rule|\n){0,80}") {
        let lines = text.split('\n').count();
        let spans = |errs: Vec<chronokg_core::ParseError>| {
            errs.iter().all(|e| e.line >= 1 && e.line <= lines && e.column >= 1)
        };
        if let Err(e) = parse_triples(&text) { prop_assert!(spans(e)); }
        if let Err(e) = parse_quintuples(&text) { prop_assert!(spans(e)); }
        if let Err(e) = parse_events(&text) { prop_assert!(spans(e)); }
        if let Err(e) = parse_ontology(&text) { prop_assert!(spans(e)); }
        let _ = parse_event_log(&text, plain_ontology(1));
    }
}
