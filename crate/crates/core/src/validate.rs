// SPDX-License-Identifier: Apache-2.0

//! Rule validation of stationary graphs.
//!
//! Violations are data: validation visits the whole graph and returns every
//! problem it finds, sorted by offending edges.

use std::fmt;

use serde::Serialize;

use crate::model::{Edge, Iri, Quintuple, ReminiscentKG, StandardKG, Term, TimePoint, Triple};
use crate::ontology::{Rule, StaticOntology, TemporalOntology, TemporalRule};

/// Which constraint a [`Violation`] breaks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolatedRule {
    /// The edge's relation is not declared in the ontology.
    UnknownRelation,
    /// A literal tail uses an undeclared datatype.
    UnknownDatatype,
    Static(Rule),
    Temporal(TemporalRule),
}

impl fmt::Display for ViolatedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolatedRule::UnknownRelation => f.write_str("unknown_relation"),
            ViolatedRule::UnknownDatatype => f.write_str("unknown_datatype"),
            ViolatedRule::Static(rule) => write!(f, "rule {rule}"),
            ViolatedRule::Temporal(rule) => write!(f, "trule {rule}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    pub rule: ViolatedRule,
    /// Never empty; sorted canonically.
    pub offenders: Vec<Edge>,
    pub message: String,
}

impl Violation {
    fn new(rule: ViolatedRule, mut offenders: Vec<Edge>, message: String) -> Self {
        debug_assert!(!offenders.is_empty());
        offenders.sort();
        Violation {
            rule,
            offenders,
            message,
        }
    }

    fn involves(&self, edge: &Edge) -> bool {
        self.offenders.contains(edge)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)?;
        for (i, e) in self.offenders.iter().enumerate() {
            f.write_str(if i == 0 { " [" } else { ", " })?;
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

fn sort_violations(violations: &mut [Violation]) {
    violations
        .sort_by_cached_key(|v| (v.offenders[0].triple(), v.offenders.clone(), v.rule.clone()));
}

/// Checks every edge of a standard KG against the static rules.
pub fn validate_standard(graph: &StandardKG, ontology: &StaticOntology) -> Vec<Violation> {
    let has_type =
        |entity: &Iri, concept: &Iri| graph.contains(&typing_edge(ontology, entity, concept));
    let mut out = Vec::new();
    for edge in graph.edges() {
        check_triple(edge, ontology, &has_type, &mut out);
    }
    for rule in ontology.rules() {
        if let Rule::Functional { relation } = rule {
            let mut group: Vec<&Triple> = Vec::new();
            for edge in graph.edges().iter().filter(|e| &e.relation == relation) {
                if group.last().is_some_and(|g| g.head != edge.head) {
                    check_functional(rule, &group, &mut out);
                    group.clear();
                }
                group.push(edge);
            }
            check_functional(rule, &group, &mut out);
        }
    }
    sort_violations(&mut out);
    out
}

/// Static rules on the projected triples plus temporal rules on the
/// quintuples. Empty iff the graph is a valid reminiscent KG.
pub fn validate_reminiscent(graph: &ReminiscentKG, ontology: &TemporalOntology) -> Vec<Violation> {
    let mut out = validate_standard(&graph.project(), ontology.base());
    for rule in ontology.temporal_rules() {
        match rule {
            TemporalRule::Order | TemporalRule::WithinTimeDomain => {
                for q in graph.edges() {
                    check_interval(rule, ontology, q, &mut out);
                }
            }
            TemporalRule::NoOverlap { relation } => {
                for_each_group(
                    graph.edges().iter().filter(|q| q.relation() == relation),
                    |a, b| a.same_triple(&b.triple()),
                    |group| check_pairs(rule, group, None, &mut out),
                );
            }
            TemporalRule::FunctionalAtEveryInstant { relation } => {
                for_each_group(
                    graph.edges().iter().filter(|q| q.relation() == relation),
                    |a, b| a.head() == b.head(),
                    |group| check_pairs(rule, group, None, &mut out),
                );
            }
        }
    }
    sort_violations(&mut out);
    out
}

/// True iff every edge is still active.
pub fn is_semi_reminiscent(graph: &ReminiscentKG) -> bool {
    graph.is_semi_reminiscent()
}

/// A single change to an otherwise rule-clean quintuple store.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Change<'a> {
    Added(&'a Quintuple),
    /// The edge after a valid_until rewrite.
    Rewritten(&'a Quintuple),
    Removed(&'a Quintuple),
}

/// Violations of `graph` (already updated) that `change` can have
/// introduced. When the graph was rule-clean before the change, this equals
/// [`validate_reminiscent`] on the updated graph.
pub(crate) fn violations_after_change(
    graph: &ReminiscentKG,
    ontology: &TemporalOntology,
    change: Change<'_>,
) -> Vec<Violation> {
    let base = ontology.base();
    let has_type =
        |entity: &Iri, concept: &Iri| graph.contains_triple(&typing_edge(base, entity, concept));
    let mut out = Vec::new();
    let changed = match change {
        Change::Added(q) => q,
        Change::Rewritten(q) => q,
        Change::Removed(q) => {
            let key = q.triple();
            if &key.relation == base.typing_relation() && !graph.contains_triple(&key) {
                if let Term::Entity(concept) = &key.tail {
                    retype_checks(graph, base, &key.head, concept, &has_type, &mut out);
                }
            }
            sort_violations(&mut out);
            return out;
        }
    };

    if let Change::Added(q) = change {
        let key = q.triple();
        // Static rules only see the projection, which changes only for a new triple.
        if graph.with_triple(&key).nth(1).is_none() {
            check_triple(&key, base, &has_type, &mut out);
            for rule in base.rules() {
                if let Rule::Functional { relation } = rule {
                    if relation == &key.relation {
                        let mut group: Vec<Triple> = graph
                            .edges_with_head(&key.head)
                            .filter(|e| e.relation() == relation)
                            .map(Quintuple::triple)
                            .collect();
                        group.dedup();
                        let group: Vec<&Triple> = group.iter().collect();
                        check_functional(rule, &group, &mut out);
                    }
                }
            }
        }
    }

    for rule in ontology.temporal_rules() {
        match rule {
            TemporalRule::Order | TemporalRule::WithinTimeDomain => {
                check_interval(rule, ontology, changed, &mut out);
            }
            TemporalRule::NoOverlap { relation } if changed.relation() == relation => {
                let key = changed.triple();
                let group: Vec<&Quintuple> = graph.with_triple(&key).collect();
                check_pairs(rule, &group, Some(changed), &mut out);
            }
            TemporalRule::FunctionalAtEveryInstant { relation }
                if changed.relation() == relation =>
            {
                let group: Vec<&Quintuple> = graph
                    .edges_with_head(changed.head())
                    .filter(|q| q.relation() == relation)
                    .collect();
                check_pairs(rule, &group, Some(changed), &mut out);
            }
            _ => {}
        }
    }
    sort_violations(&mut out);
    out
}

/// After `entity` loses `concept`, re-checks DOMAIN/RANGE rules that relied on it.
fn retype_checks(
    graph: &ReminiscentKG,
    ontology: &StaticOntology,
    entity: &Iri,
    concept: &Iri,
    has_type: &dyn Fn(&Iri, &Iri) -> bool,
    out: &mut Vec<Violation>,
) {
    let needs_domain = ontology
        .rules()
        .iter()
        .any(|r| matches!(r, Rule::Domain { concept: c, .. } if c == concept));
    let needs_range = ontology
        .rules()
        .iter()
        .any(|r| matches!(r, Rule::RangeConcept { concept: c, .. } if c == concept));
    let mut affected: Vec<Triple> = Vec::new();
    if needs_domain {
        affected.extend(graph.edges_with_head(entity).map(Quintuple::triple));
    }
    if needs_range {
        affected.extend(
            graph
                .edges()
                .iter()
                .filter(|q| q.tail().as_entity() == Some(entity))
                .map(Quintuple::triple),
        );
    }
    affected.sort();
    affected.dedup();
    let mut found = Vec::new();
    for edge in &affected {
        check_triple(edge, ontology, has_type, &mut found);
    }
    // Only rules about the lost concept can newly fail.
    out.extend(found.into_iter().filter(|v| match &v.rule {
        ViolatedRule::Static(Rule::Domain { concept: c, .. })
        | ViolatedRule::Static(Rule::RangeConcept { concept: c, .. }) => c == concept,
        _ => false,
    }));
}

fn typing_edge(ontology: &StaticOntology, entity: &Iri, concept: &Iri) -> Triple {
    Triple::new(
        entity.clone(),
        ontology.typing_relation().clone(),
        Term::Entity(concept.clone()),
    )
}

/// Per-edge checks: declarations, DOMAIN and RANGE.
fn check_triple(
    edge: &Triple,
    ontology: &StaticOntology,
    has_type: &dyn Fn(&Iri, &Iri) -> bool,
    out: &mut Vec<Violation>,
) {
    let offender = || vec![Edge::Triple(edge.clone())];
    if !ontology.relations().contains(&edge.relation) {
        out.push(Violation::new(
            ViolatedRule::UnknownRelation,
            offender(),
            format!("relation {} is not declared", edge.relation),
        ));
    }
    if let Term::Literal { datatype, .. } = &edge.tail {
        if !ontology.datatypes().contains(datatype) {
            out.push(Violation::new(
                ViolatedRule::UnknownDatatype,
                offender(),
                format!("datatype {datatype} is not declared"),
            ));
        }
    }
    for rule in ontology.rules() {
        if rule.relation() != &edge.relation {
            continue;
        }
        let message = match rule {
            Rule::Domain { concept, .. } if !has_type(&edge.head, concept) => {
                format!("head {} is not typed {concept}", edge.head)
            }
            Rule::RangeConcept { concept, .. } => match &edge.tail {
                Term::Entity(tail) if has_type(tail, concept) => continue,
                Term::Entity(tail) => format!("tail {tail} is not typed {concept}"),
                Term::Literal { .. } => format!("tail is a literal, expected a {concept}"),
            },
            Rule::RangeDatatype { datatype, .. } => match &edge.tail {
                Term::Literal { datatype: d, .. } if d == datatype => continue,
                _ => format!("tail is not a {datatype} literal"),
            },
            _ => continue,
        };
        out.push(Violation::new(
            ViolatedRule::Static(rule.clone()),
            offender(),
            message,
        ));
    }
}

/// `group` holds the distinct triples sharing one head under the rule's relation.
fn check_functional(rule: &Rule, group: &[&Triple], out: &mut Vec<Violation>) {
    if group.len() > 1 {
        out.push(Violation::new(
            ViolatedRule::Static(rule.clone()),
            group.iter().map(|t| Edge::Triple((*t).clone())).collect(),
            format!("{} has {} distinct tails", group[0].head, group.len()),
        ));
    }
}

fn check_interval(
    rule: &TemporalRule,
    ontology: &TemporalOntology,
    q: &Quintuple,
    out: &mut Vec<Violation>,
) {
    let message = match rule {
        TemporalRule::Order if !q.is_well_ordered() => format!(
            "valid_from {} is after valid_until {}",
            q.valid_from(),
            q.valid_until()
        ),
        TemporalRule::WithinTimeDomain => {
            let Some((lo, hi)) = ontology.time_domain() else {
                return;
            };
            let outside = |t: TimePoint| t.finite().is_some_and(|t| t < lo || t > hi);
            if !outside(q.valid_from()) && !outside(q.valid_until()) {
                return;
            }
            format!("finite endpoint outside time domain [{lo}, {hi}]")
        }
        _ => return,
    };
    out.push(Violation::new(
        ViolatedRule::Temporal(rule.clone()),
        vec![Edge::Quintuple(q.clone())],
        message,
    ));
}

/// Pairwise interval checks inside one group. With `only`, pairs not
/// containing that quintuple are skipped.
fn check_pairs(
    rule: &TemporalRule,
    group: &[&Quintuple],
    only: Option<&Quintuple>,
    out: &mut Vec<Violation>,
) {
    for (i, a) in group.iter().enumerate() {
        for b in &group[i + 1..] {
            if only.is_some_and(|o| o != *a && o != *b) || !a.overlaps(b) {
                continue;
            }
            let message = match rule {
                TemporalRule::NoOverlap { .. } => "validity intervals overlap".to_owned(),
                TemporalRule::FunctionalAtEveryInstant { .. } if a.tail() != b.tail() => {
                    format!("{} has two tails valid at the same instant", a.head())
                }
                _ => continue,
            };
            let v = Violation::new(
                ViolatedRule::Temporal(rule.clone()),
                vec![Edge::Quintuple((*a).clone()), Edge::Quintuple((*b).clone())],
                message,
            );
            debug_assert!(only.is_none_or(|o| v.involves(&Edge::Quintuple(o.clone()))));
            out.push(v);
        }
    }
}

/// Calls `f` on each maximal run of consecutive items related by `same`.
fn for_each_group<'a, I, S, F>(items: I, same: S, mut f: F)
where
    I: Iterator<Item = &'a Quintuple>,
    S: Fn(&Quintuple, &Quintuple) -> bool,
    F: FnMut(&[&'a Quintuple]),
{
    let mut group: Vec<&'a Quintuple> = Vec::new();
    for q in items {
        if group.last().is_some_and(|g| !same(g, q)) {
            f(&group);
            group.clear();
        }
        group.push(q);
    }
    if !group.is_empty() {
        f(&group);
    }
}
