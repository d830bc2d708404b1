// SPDX-License-Identifier: Apache-2.0

//! Static and temporal ontologies and their closed rule algebra.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Iri, Tick};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("{kind} {id} is not declared")]
    Undeclared { kind: &'static str, id: Iri },
    #[error("{id} is declared both as a concept and as a datatype")]
    AmbiguousRange { id: Iri },
    #[error("time domain [{lo}, {hi}] is empty")]
    EmptyTimeDomain { lo: Tick, hi: Tick },
}

/// Instantiation rule over triples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// Heads of `relation` must be typed with `concept`.
    Domain { relation: Iri, concept: Iri },
    /// Entity tails of `relation` must be typed with `concept`.
    RangeConcept { relation: Iri, concept: Iri },
    /// Tails of `relation` must be literals of `datatype`.
    RangeDatatype { relation: Iri, datatype: Iri },
    /// Each head has at most one tail under `relation`.
    Functional { relation: Iri },
}

impl Rule {
    pub fn relation(&self) -> &Iri {
        match self {
            Rule::Domain { relation, .. }
            | Rule::RangeConcept { relation, .. }
            | Rule::RangeDatatype { relation, .. }
            | Rule::Functional { relation } => relation,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Domain { relation, concept } => write!(f, "domain {relation} {concept}"),
            Rule::RangeConcept { relation, concept } => write!(f, "range {relation} {concept}"),
            Rule::RangeDatatype { relation, datatype } => {
                write!(f, "range {relation} {datatype}")
            }
            Rule::Functional { relation } => write!(f, "functional {relation}"),
        }
    }
}

/// Time-related rule over quintuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum TemporalRule {
    /// `valid_from <= valid_until`. Always present.
    Order,
    /// Intervals of the same `(h, r, t)` are pairwise disjoint.
    NoOverlap { relation: Iri },
    /// For each head and instant, at most one valid tail.
    FunctionalAtEveryInstant { relation: Iri },
    /// Finite endpoints lie inside the declared time domain.
    WithinTimeDomain,
}

impl fmt::Display for TemporalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemporalRule::Order => f.write_str("order"),
            TemporalRule::NoOverlap { relation } => write!(f, "no_overlap {relation}"),
            TemporalRule::FunctionalAtEveryInstant { relation } => {
                write!(f, "functional_instant {relation}")
            }
            TemporalRule::WithinTimeDomain => f.write_str("within_time_domain"),
        }
    }
}

/// `(C, L, R, ρ)` plus the relation used for entity-to-concept typing edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StaticOntology {
    concepts: BTreeSet<Iri>,
    datatypes: BTreeSet<Iri>,
    relations: BTreeSet<Iri>,
    typing_relation: Iri,
    rules: Vec<Rule>,
}

impl StaticOntology {
    /// An ontology with only the typing relation declared.
    pub fn new(typing_relation: Iri) -> Self {
        StaticOntology {
            concepts: BTreeSet::new(),
            datatypes: BTreeSet::new(),
            relations: BTreeSet::from([typing_relation.clone()]),
            typing_relation,
            rules: Vec::new(),
        }
    }

    pub fn declare_concept(&mut self, id: Iri) -> Result<bool, OntologyError> {
        if self.datatypes.contains(&id) {
            return Err(OntologyError::AmbiguousRange { id });
        }
        Ok(self.concepts.insert(id))
    }

    pub fn declare_datatype(&mut self, id: Iri) -> Result<bool, OntologyError> {
        if self.concepts.contains(&id) {
            return Err(OntologyError::AmbiguousRange { id });
        }
        Ok(self.datatypes.insert(id))
    }

    pub fn declare_relation(&mut self, id: Iri) -> bool {
        self.relations.insert(id)
    }

    /// Adds a rule after checking every identifier it references.
    pub fn add_rule(&mut self, rule: Rule) -> Result<(), OntologyError> {
        self.require_relation(rule.relation())?;
        match &rule {
            Rule::Domain { concept, .. } | Rule::RangeConcept { concept, .. } => {
                if !self.concepts.contains(concept) {
                    return Err(OntologyError::Undeclared {
                        kind: "concept",
                        id: concept.clone(),
                    });
                }
            }
            Rule::RangeDatatype { datatype, .. } => {
                if !self.datatypes.contains(datatype) {
                    return Err(OntologyError::Undeclared {
                        kind: "datatype",
                        id: datatype.clone(),
                    });
                }
            }
            Rule::Functional { .. } => {}
        }
        if let Err(at) = self.rules.binary_search(&rule) {
            self.rules.insert(at, rule);
        }
        Ok(())
    }

    /// Resolves `range <rel> <id>` to a concept or datatype rule.
    pub fn range_rule(&self, relation: Iri, target: Iri) -> Result<Rule, OntologyError> {
        if self.concepts.contains(&target) {
            Ok(Rule::RangeConcept {
                relation,
                concept: target,
            })
        } else if self.datatypes.contains(&target) {
            Ok(Rule::RangeDatatype {
                relation,
                datatype: target,
            })
        } else {
            Err(OntologyError::Undeclared {
                kind: "concept or datatype",
                id: target,
            })
        }
    }

    fn require_relation(&self, relation: &Iri) -> Result<(), OntologyError> {
        if self.relations.contains(relation) {
            Ok(())
        } else {
            Err(OntologyError::Undeclared {
                kind: "relation",
                id: relation.clone(),
            })
        }
    }

    pub fn concepts(&self) -> &BTreeSet<Iri> {
        &self.concepts
    }

    pub fn datatypes(&self) -> &BTreeSet<Iri> {
        &self.datatypes
    }

    pub fn relations(&self) -> &BTreeSet<Iri> {
        &self.relations
    }

    pub fn typing_relation(&self) -> &Iri {
        &self.typing_relation
    }

    /// Rules in canonical order.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }
}

/// `(C, L, R, T, ρ+)`: a static ontology extended with an optional bounded
/// time domain and time-related rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemporalOntology {
    base: StaticOntology,
    time_domain: Option<(Tick, Tick)>,
    temporal_rules: Vec<TemporalRule>,
}

impl TemporalOntology {
    pub fn new(base: StaticOntology) -> Self {
        TemporalOntology {
            base,
            time_domain: None,
            temporal_rules: vec![TemporalRule::Order],
        }
    }

    /// Declares every identifier the given triples use, with no rules
    /// beyond ORDER. Used when no ontology file is supplied.
    pub fn permissive<'a, I>(typing_relation: Iri, triples: I) -> Self
    where
        I: IntoIterator<Item = &'a crate::model::Triple>,
    {
        let mut base = StaticOntology::new(typing_relation);
        for t in triples {
            base.declare_relation(t.relation.clone());
            if let crate::model::Term::Literal { datatype, .. } = &t.tail {
                base.datatypes.insert(datatype.clone());
            }
        }
        TemporalOntology::new(base)
    }

    /// Bounds the finite timestamps and enables the WITHIN_TIME_DOMAIN rule.
    pub fn set_time_domain(&mut self, lo: Tick, hi: Tick) -> Result<(), OntologyError> {
        if lo > hi {
            return Err(OntologyError::EmptyTimeDomain { lo, hi });
        }
        self.time_domain = Some((lo, hi));
        self.push_temporal(TemporalRule::WithinTimeDomain);
        Ok(())
    }

    pub fn add_temporal_rule(&mut self, rule: TemporalRule) -> Result<(), OntologyError> {
        match &rule {
            TemporalRule::NoOverlap { relation }
            | TemporalRule::FunctionalAtEveryInstant { relation } => {
                self.base.require_relation(relation)?;
            }
            TemporalRule::WithinTimeDomain if self.time_domain.is_none() => {
                return Err(OntologyError::Undeclared {
                    kind: "time domain",
                    id: Iri::new("time_domain").expect("static identifier"),
                });
            }
            _ => {}
        }
        self.push_temporal(rule);
        Ok(())
    }

    // Kept sorted so that equal rule sets compare equal.
    fn push_temporal(&mut self, rule: TemporalRule) {
        if let Err(at) = self.temporal_rules.binary_search(&rule) {
            self.temporal_rules.insert(at, rule);
        }
    }

    pub fn base(&self) -> &StaticOntology {
        &self.base
    }

    pub fn base_mut(&mut self) -> &mut StaticOntology {
        &mut self.base
    }

    pub fn time_domain(&self) -> Option<(Tick, Tick)> {
        self.time_domain
    }

    pub fn temporal_rules(&self) -> &[TemporalRule] {
        &self.temporal_rules
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn typing_relation_is_declared() {
        let o = StaticOntology::new(iri("type"));
        assert!(o.relations().contains(&iri("type")));
    }

    #[test]
    fn rules_must_reference_declarations() {
        let mut o = StaticOntology::new(iri("type"));
        let domain = Rule::Domain {
            relation: iri("member"),
            concept: iri("Country"),
        };
        assert!(o.add_rule(domain.clone()).is_err());
        o.declare_relation(iri("member"));
        assert!(o.add_rule(domain.clone()).is_err());
        o.declare_concept(iri("Country")).unwrap();
        o.add_rule(domain.clone()).unwrap();
        o.add_rule(domain).unwrap();
        assert_eq!(o.rules().len(), 1);
    }

    #[test]
    fn range_resolves_by_declaration() {
        let mut o = StaticOntology::new(iri("type"));
        o.declare_concept(iri("Union")).unwrap();
        o.declare_datatype(iri("year")).unwrap();
        assert!(matches!(
            o.range_rule(iri("member"), iri("Union")).unwrap(),
            Rule::RangeConcept { .. }
        ));
        assert!(matches!(
            o.range_rule(iri("founded"), iri("year")).unwrap(),
            Rule::RangeDatatype { .. }
        ));
        assert!(o.range_rule(iri("founded"), iri("nope")).is_err());
        assert!(o.declare_concept(iri("year")).is_err());
    }

    #[test]
    fn order_rule_is_built_in() {
        let mut o = TemporalOntology::new(StaticOntology::new(iri("type")));
        assert_eq!(o.temporal_rules(), [TemporalRule::Order]);
        o.add_temporal_rule(TemporalRule::Order).unwrap();
        assert_eq!(o.temporal_rules().len(), 1);
    }

    #[test]
    fn time_domain_must_be_non_empty() {
        let mut o = TemporalOntology::new(StaticOntology::new(iri("type")));
        assert!(o.add_temporal_rule(TemporalRule::WithinTimeDomain).is_err());
        assert!(o.set_time_domain(10, 5).is_err());
        o.set_time_domain(1900, 2100).unwrap();
        assert!(o.temporal_rules().contains(&TemporalRule::WithinTimeDomain));
    }
}
