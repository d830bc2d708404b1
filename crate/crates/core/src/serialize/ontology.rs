// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use crate::model::{Iri, Tick};
use crate::ontology::{OntologyError, Rule, StaticOntology, TemporalOntology, TemporalRule};

use super::graph::parse_lines;
use super::lexer::Cursor;
use super::{ParseError, ParseErrorKind};

/// Typing relation used when a file has no `typing` line.
pub const DEFAULT_TYPING_RELATION: &str = "type";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Decl {
    Concept(Iri),
    Datatype(Iri),
    Relation(Iri),
    Typing(Iri),
    Domain(Iri, Iri),
    Range(Iri, Iri),
    Functional(Iri),
    NoOverlap(Iri),
    FunctionalInstant(Iri),
    TimeDomain(Tick, Tick),
}

impl Decl {
    /// Declarations sharing a slot may appear only once.
    fn slot(&self) -> Decl {
        match self {
            Decl::Typing(_) => Decl::Typing(Iri::min_bound()),
            Decl::TimeDomain(..) => Decl::TimeDomain(0, 0),
            other => other.clone(),
        }
    }
}

/// Parses the line-oriented ontology format:
///
/// ```text
/// concept <id>        datatype <id>        relation <id>       typing <id>
/// rule domain <rel> <concept>              rule range <rel> <concept|datatype>
/// rule functional <rel>                    trule no_overlap <rel>
/// trule functional_instant <rel>           time_domain <lo> <hi>
/// ```
///
/// Declarations may come in any order; rules are resolved after all
/// identifiers are known.
pub fn parse_ontology(text: &str) -> Result<TemporalOntology, Vec<ParseError>> {
    let decls = parse_lines(text, |cur| {
        let decl = read_decl(cur)?;
        cur.end()?;
        Ok(decl)
    })?;

    let mut errors = Vec::new();
    let mut seen: HashMap<Decl, usize> = HashMap::new();
    for (line, decl) in &decls {
        if let Some(first) = seen.insert(decl.slot(), *line) {
            errors.push(ParseError::new(
                *line,
                1,
                ParseErrorKind::DuplicateDecl,
                format!("repeats the declaration on line {first}"),
            ));
        }
    }

    let typing = decls
        .iter()
        .find_map(|(_, d)| match d {
            Decl::Typing(t) => Some(t.clone()),
            _ => None,
        })
        .unwrap_or_else(|| Iri::new(DEFAULT_TYPING_RELATION).expect("valid default"));
    let mut base = StaticOntology::new(typing);
    for (line, decl) in &decls {
        let outcome = match decl {
            Decl::Concept(id) => base.declare_concept(id.clone()).map(drop),
            Decl::Datatype(id) => base.declare_datatype(id.clone()).map(drop),
            Decl::Relation(id) => {
                base.declare_relation(id.clone());
                Ok(())
            }
            _ => Ok(()),
        };
        if let Err(e) = outcome {
            errors.push(ParseError::new(
                *line,
                1,
                ParseErrorKind::DuplicateDecl,
                e.to_string(),
            ));
        }
    }
    let undeclared = |line: usize, e: OntologyError| {
        let kind = match e {
            OntologyError::EmptyTimeDomain { .. } => ParseErrorKind::BadTimepoint,
            _ => ParseErrorKind::BadTerm,
        };
        ParseError::new(line, 1, kind, e.to_string())
    };
    for (line, decl) in &decls {
        let outcome = match decl {
            Decl::Domain(relation, concept) => base.add_rule(Rule::Domain {
                relation: relation.clone(),
                concept: concept.clone(),
            }),
            Decl::Range(relation, target) => base
                .range_rule(relation.clone(), target.clone())
                .and_then(|rule| base.add_rule(rule)),
            Decl::Functional(relation) => base.add_rule(Rule::Functional {
                relation: relation.clone(),
            }),
            _ => Ok(()),
        };
        if let Err(e) = outcome {
            errors.push(undeclared(*line, e));
        }
    }
    let mut ontology = TemporalOntology::new(base);
    for (line, decl) in &decls {
        let outcome = match decl {
            Decl::NoOverlap(relation) => ontology.add_temporal_rule(TemporalRule::NoOverlap {
                relation: relation.clone(),
            }),
            Decl::FunctionalInstant(relation) => {
                ontology.add_temporal_rule(TemporalRule::FunctionalAtEveryInstant {
                    relation: relation.clone(),
                })
            }
            Decl::TimeDomain(lo, hi) => ontology.set_time_domain(*lo, *hi),
            _ => Ok(()),
        };
        if let Err(e) = outcome {
            errors.push(undeclared(*line, e));
        }
    }

    if errors.is_empty() {
        Ok(ontology)
    } else {
        errors.sort_by_key(|e| (e.line, e.column));
        Err(errors)
    }
}

fn read_decl(cur: &mut Cursor<'_>) -> Result<Decl, ParseError> {
    let (keyword, token) = cur.word("a declaration keyword")?;
    let decl = match keyword {
        "concept" => Decl::Concept(cur.iri("concept")?),
        "datatype" => Decl::Datatype(cur.iri("datatype")?),
        "relation" => Decl::Relation(cur.iri("relation")?),
        "typing" => Decl::Typing(cur.iri("typing relation")?),
        "time_domain" => {
            let lo = cur.tick("lower bound")?;
            let hi = cur.tick("upper bound")?;
            Decl::TimeDomain(lo, hi)
        }
        "rule" => {
            let (kind, token) = cur.word("domain, range or functional")?;
            match kind {
                "domain" => Decl::Domain(cur.iri("relation")?, cur.iri("concept")?),
                "range" => Decl::Range(cur.iri("relation")?, cur.iri("concept or datatype")?),
                "functional" => Decl::Functional(cur.iri("relation")?),
                other => return Err(unknown(cur, token, other)),
            }
        }
        "trule" => {
            let (kind, token) = cur.word("no_overlap or functional_instant")?;
            match kind {
                "no_overlap" => Decl::NoOverlap(cur.iri("relation")?),
                "functional_instant" => Decl::FunctionalInstant(cur.iri("relation")?),
                other => return Err(unknown(cur, token, other)),
            }
        }
        other => return Err(unknown(cur, token, other)),
    };
    Ok(decl)
}

fn unknown(cur: &Cursor<'_>, token: &super::lexer::Token, word: &str) -> ParseError {
    cur.error(
        Some(token),
        ParseErrorKind::UnknownKeyword,
        format!("unknown keyword {word:?}"),
    )
}

/// Canonical form: typing, sorted declarations, rules, temporal rules, then
/// the time domain. The built-in rules are implied and not written.
pub fn write_ontology(ontology: &TemporalOntology) -> String {
    let base = ontology.base();
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("typing {}", base.typing_relation()));
    for c in base.concepts() {
        line(format!("concept {c}"));
    }
    for d in base.datatypes() {
        line(format!("datatype {d}"));
    }
    for r in base
        .relations()
        .iter()
        .filter(|r| *r != base.typing_relation())
    {
        line(format!("relation {r}"));
    }
    for rule in base.rules() {
        line(format!("rule {rule}"));
    }
    for rule in ontology.temporal_rules() {
        match rule {
            TemporalRule::Order | TemporalRule::WithinTimeDomain => {}
            other => line(format!("trule {other}")),
        }
    }
    if let Some((lo, hi)) = ontology.time_domain() {
        line(format!("time_domain {lo} {hi}"));
    }
    out
}
