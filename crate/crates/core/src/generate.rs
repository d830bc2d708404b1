// SPDX-License-Identifier: Apache-2.0

//! Seeded random graphs and valid change logs, for tests and benchmarks.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::log::{Action, ChangeEvent, ChangeLog};
use crate::model::{Iri, Quintuple, ReminiscentKG, StandardKG, Term, Tick, TimePoint, Triple};
use crate::ontology::{StaticOntology, TemporalOntology};

#[derive(Debug, Clone)]
pub struct LogParams {
    /// Events attempted; rejected attempts are dropped, so the log may be
    /// shorter.
    pub events: usize,
    pub entities: usize,
    pub relations: usize,
    pub allow_retract: bool,
    pub allow_close: bool,
    /// Allow ASSERT of already-closed intervals.
    pub allow_finite_assert: bool,
    /// Chance that an asserted edge starts at `-inf`.
    pub unbounded_start: f64,
    /// Close or retract each triple at most once.
    pub end_at_most_once: bool,
}

impl Default for LogParams {
    fn default() -> Self {
        LogParams {
            events: 50,
            entities: 6,
            relations: 3,
            allow_retract: true,
            allow_close: true,
            allow_finite_assert: true,
            unbounded_start: 0.1,
            end_at_most_once: false,
        }
    }
}

pub fn entity(i: usize) -> Iri {
    Iri::new(format!("e{i}")).expect("valid identifier")
}

pub fn relation(i: usize) -> Iri {
    Iri::new(format!("r{i}")).expect("valid identifier")
}

/// Declares `r0..r{n}` and nothing else.
pub fn plain_ontology(relations: usize) -> TemporalOntology {
    let mut base = StaticOntology::new(Iri::new("type").expect("valid identifier"));
    for i in 0..relations {
        base.declare_relation(relation(i));
    }
    TemporalOntology::new(base)
}

pub fn random_triple<R: Rng + ?Sized>(rng: &mut R, entities: usize, relations: usize) -> Triple {
    Triple::new(
        entity(rng.gen_range(0..entities)),
        relation(rng.gen_range(0..relations)),
        Term::Entity(entity(rng.gen_range(0..entities))),
    )
}

/// Builds a log under `ontology` by proposing random events and keeping
/// the ones the log accepts.
pub fn random_log<R: Rng + ?Sized>(
    rng: &mut R,
    ontology: TemporalOntology,
    p: &LogParams,
) -> ChangeLog {
    let mut log = ChangeLog::new(ontology);
    let mut ended = HashSet::new();
    let mut now: Tick = rng.gen_range(0..10);
    for _ in 0..p.events {
        now += rng.gen_range(0..3);
        let Some(event) = propose(rng, &log, &ended, now, p) else {
            continue;
        };
        let key = event.key();
        let ends = !matches!(event.action, Action::Assert { .. });
        if log.append(event).is_ok() && ends && p.end_at_most_once {
            ended.insert(key);
        }
    }
    log
}

fn propose<R: Rng + ?Sized>(
    rng: &mut R,
    log: &ChangeLog,
    ended: &HashSet<Triple>,
    now: Tick,
    p: &LogParams,
) -> Option<ChangeEvent> {
    let key = random_triple(rng, p.entities, p.relations);
    let active = log
        .current()
        .with_triple(&key)
        .find(|q| q.is_active())
        .cloned();
    match active {
        Some(_) if ended.contains(&key) => None,
        Some(q) => {
            let close = p.allow_close && (!p.allow_retract || rng.gen_bool(0.7));
            if close {
                let start = q.valid_from().finite().unwrap_or(now - 20);
                Some(ChangeEvent::close(
                    now,
                    key,
                    start.max(now - 20) + rng.gen_range(0..25),
                ))
            } else if p.allow_retract {
                Some(ChangeEvent::retract(now, key))
            } else {
                None
            }
        }
        None => {
            let from = if rng.gen_bool(p.unbounded_start) {
                TimePoint::NegInf
            } else {
                TimePoint::Finite(now - rng.gen_range(0..20))
            };
            let until = if p.allow_finite_assert && rng.gen_bool(0.15) {
                let base = from.finite().unwrap_or(now - 20);
                TimePoint::Finite(base + rng.gen_range(0..15))
            } else {
                TimePoint::PosInf
            };
            Some(ChangeEvent::assert(
                now,
                Quintuple::new(key, from, until).ok()?,
            ))
        }
    }
}

const LEXICALS: [&str; 6] = [
    "1951",
    "a b",
    "quote\"d",
    "back\\slash",
    "tab\there",
    "line\nbreak",
];

/// A term that is an entity or, one time in four, a literal drawn from
/// strings that need escaping.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, entities: usize) -> Term {
    if rng.gen_bool(0.25) {
        let lexical = LEXICALS.choose(rng).expect("non-empty");
        Term::literal(*lexical, "string").expect("valid datatype")
    } else {
        Term::Entity(entity(rng.gen_range(0..entities)))
    }
}

pub fn random_standard<R: Rng + ?Sized>(
    rng: &mut R,
    edges: usize,
    entities: usize,
    relations: usize,
) -> StandardKG {
    (0..edges)
        .map(|_| {
            Triple::new(
                entity(rng.gen_range(0..entities)),
                relation(rng.gen_range(0..relations)),
                random_term(rng, entities),
            )
        })
        .collect()
}

pub fn random_timepoint<R: Rng + ?Sized>(rng: &mut R) -> TimePoint {
    match rng.gen_range(0..10) {
        0 => TimePoint::NegInf,
        1 => TimePoint::PosInf,
        2 => TimePoint::Finite(rng.gen()),
        _ => TimePoint::Finite(rng.gen_range(-3000..3000)),
    }
}

/// Well-ordered quintuples over random triples.
pub fn random_reminiscent<R: Rng + ?Sized>(
    rng: &mut R,
    edges: usize,
    entities: usize,
    relations: usize,
) -> ReminiscentKG {
    (0..edges)
        .map(|_| {
            let triple = Triple::new(
                entity(rng.gen_range(0..entities)),
                relation(rng.gen_range(0..relations)),
                random_term(rng, entities),
            );
            let (a, b) = (random_timepoint(rng), random_timepoint(rng));
            Quintuple::new(triple, a.min(b), a.max(b)).expect("ordered bounds")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::validate_reminiscent;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn logs_are_valid_and_seeded() {
        let p = LogParams::default();
        let a = random_log(&mut ChaCha8Rng::seed_from_u64(7), plain_ontology(3), &p);
        let b = random_log(&mut ChaCha8Rng::seed_from_u64(7), plain_ontology(3), &p);
        assert_eq!(a, b);
        assert!(a.len() > 20);
        assert!(validate_reminiscent(a.current(), a.ontology()).is_empty());
        assert!(a
            .events()
            .iter()
            .any(|e| matches!(e.action, Action::Close { .. })));
        assert!(a
            .events()
            .iter()
            .any(|e| matches!(e.action, Action::Retract { .. })));
    }

    #[test]
    fn retract_free_logs() {
        let p = LogParams {
            allow_retract: false,
            ..LogParams::default()
        };
        let log = random_log(&mut ChaCha8Rng::seed_from_u64(1), plain_ontology(3), &p);
        assert!(log
            .events()
            .iter()
            .all(|e| !matches!(e.action, Action::Retract { .. })));
    }
}
