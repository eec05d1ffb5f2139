//! Closed-world validation of a graph against a compiled theory.
//!
//! Saturation with the theory's inference rules always runs first, so a type
//! that is derivable rather than asserted never causes a spurious finding.
//! In materialize-first mode the generating rules are chased as well, which
//! repairs missing existential witnesses with fresh nulls before checking.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::Serialize;

use crate::axiom::{CompiledTheory, ConstraintKind, PropertyRef};
use crate::chase;
use crate::graph::Graph;
use crate::term::{Term, TermPattern, TriplePattern, RDF_TYPE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Closed,
    MaterializeFirst,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closed" => Ok(Mode::Closed),
            "materialize-first" => Ok(Mode::MaterializeFirst),
            other => Err(format!(
                "unknown mode {other:?}, expected \"closed\" or \"materialize-first\""
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ViolationKind {
    #[serde(rename = "missing-witness")]
    MissingWitness,
    #[serde(rename = "range-breach")]
    RangeBreach,
    #[serde(rename = "cardinality-exceeded")]
    CardinalityExceeded,
}

/// One finding: the axiom that was breached, where, and by which terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub kind: ViolationKind,
    pub focus: Term,
    pub witnesses: Vec<Term>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub checks_run: usize,
    pub nodes_inspected: usize,
    pub inferred_triples: usize,
    pub nulls_created: usize,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub conforms: bool,
    pub violations: Vec<Violation>,
    pub info: Vec<String>,
    pub stats: Stats,
}

#[derive(Serialize)]
struct ViolationJson<'a> {
    axiom: &'a str,
    kind: ViolationKind,
    focus: String,
    witnesses: Vec<String>,
    message: &'a str,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    conforms: bool,
    violations: Vec<ViolationJson<'a>>,
    info: &'a [String],
    stats: &'a Stats,
}

impl ValidationReport {
    /// Stable-key-order JSON: `{conforms, violations, info, stats}` with
    /// terms rendered in lexical form. Byte-identical for equal inputs.
    pub fn to_json(&self) -> String {
        let violations = self
            .violations
            .iter()
            .map(|v| ViolationJson {
                axiom: &v.axiom,
                kind: v.kind,
                focus: v.focus.lexical_form(),
                witnesses: v.witnesses.iter().map(Term::lexical_form).collect(),
                message: &v.message,
            })
            .collect();
        serde_json::to_string_pretty(&ReportJson {
            conforms: self.conforms,
            violations,
            info: &self.info,
            stats: &self.stats,
        })
        .expect("report serializes")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ValidateError {
    #[error("materialization did not reach a fixpoint within {rounds} rounds")]
    MaterializationBudget { rounds: usize },
    #[error(transparent)]
    Rule(#[from] chase::RuleError),
}

/// Round budget for materialize-first repairs. The bundled theories reach a
/// fixpoint in a handful of rounds; hitting this budget is an error rather
/// than a silent partial repair.
pub const MATERIALIZE_MAX_ROUNDS: usize = 32;

pub fn validate(
    graph: &Graph,
    theory: &CompiledTheory,
    mode: Mode,
) -> Result<ValidationReport, ValidateError> {
    // Work on a private copy: the caller's graph is never mutated.
    let mut work = graph.clone();
    // Inference saturation runs to fixpoint before anything else, so a type
    // that is merely derivable can satisfy an existential head or scope a
    // check exactly like an asserted one.
    let saturation = chase::saturate(&mut work, &theory.inference_rules)?;
    let mut nulls_created = 0;
    if mode == Mode::MaterializeFirst {
        let mut rules: Vec<chase::ExistentialRule> = theory.inference_rules.clone();
        rules.extend(theory.generating_rules.iter().cloned());
        let repair = chase::chase(&mut work, &rules, MATERIALIZE_MAX_ROUNDS)?;
        if !repair.terminated {
            return Err(ValidateError::MaterializationBudget {
                rounds: repair.rounds,
            });
        }
        nulls_created = repair.nulls_created;
    }

    let mut stats = Stats {
        checks_run: 0,
        nodes_inspected: 0,
        inferred_triples: saturation.added_count(),
        nulls_created,
    };
    let mut inspected: BTreeSet<Term> = BTreeSet::new();
    let mut violations: Vec<Violation> = Vec::new();

    // Existential witnesses are a closed-world concern: after a terminated
    // materialize-first chase every trigger is satisfied by construction.
    if mode == Mode::Closed {
        for rule in &theory.generating_rules {
            let unsatisfied = chase::unsatisfied_triggers(&work, rule);
            let body: Vec<_> = rule.body.iter().map(chase::Atom::to_pattern).collect();
            for binding in work.solve(&body, &Default::default()) {
                let focus = binding.get("x").cloned().expect("generator binds x");
                stats.checks_run += 1;
                inspected.insert(focus.clone());
                if !unsatisfied.contains(&binding) {
                    continue;
                }
                violations.push(Violation {
                    axiom: rule.id.clone(),
                    kind: ViolationKind::MissingWitness,
                    focus: focus.clone(),
                    witnesses: vec![],
                    message: format!(
                        "axiom {}: {} has no required witness",
                        rule.id,
                        focus.lexical_form()
                    ),
                });
            }
        }
    }

    for constraint in &theory.constraints {
        match &constraint.kind {
            ConstraintKind::Range {
                class,
                property,
                filler,
            } => {
                for focus in instances_of(&work, class) {
                    stats.checks_run += 1;
                    inspected.insert(focus.clone());
                    for value in successors(&work, &focus, property) {
                        if !has_type(&work, &value, filler) {
                            violations.push(Violation {
                                axiom: constraint.axiom_id.clone(),
                                kind: ViolationKind::RangeBreach,
                                focus: focus.clone(),
                                witnesses: vec![value.clone()],
                                message: format!(
                                    "axiom {}: {} reaches {} which is not typed as required",
                                    constraint.axiom_id,
                                    focus.lexical_form(),
                                    value.lexical_form()
                                ),
                            });
                        }
                    }
                }
            }
            ConstraintKind::MaxCard {
                class,
                property,
                filler,
                limit,
            } => {
                for focus in instances_of(&work, class) {
                    stats.checks_run += 1;
                    inspected.insert(focus.clone());
                    // only fillers carrying the required type count; untyped
                    // fillers surface through the paired range check instead
                    let fillers: BTreeSet<Term> = successors(&work, &focus, property)
                        .into_iter()
                        .filter(|v| has_type(&work, v, filler))
                        .collect();
                    if fillers.len() > *limit as usize {
                        violations.push(Violation {
                            axiom: constraint.axiom_id.clone(),
                            kind: ViolationKind::CardinalityExceeded,
                            focus: focus.clone(),
                            witnesses: fillers.into_iter().collect(),
                            message: format!(
                                "axiom {}: {} has more than {} distinct fillers",
                                constraint.axiom_id,
                                focus.lexical_form(),
                                limit
                            ),
                        });
                    }
                }
            }
        }
    }

    violations.sort_by(|a, b| {
        (&a.axiom, a.focus.lexical_form(), witness_key(a)).cmp(&(
            &b.axiom,
            b.focus.lexical_form(),
            witness_key(b),
        ))
    });
    stats.nodes_inspected = inspected.len();
    let info: Vec<String> = theory
        .informational
        .iter()
        .map(|n| n.message.clone())
        .collect();
    Ok(ValidationReport {
        conforms: violations.is_empty(),
        violations,
        info,
        stats,
    })
}

fn witness_key(v: &Violation) -> Vec<String> {
    v.witnesses.iter().map(Term::lexical_form).collect()
}

fn instances_of(graph: &Graph, class: &str) -> Vec<Term> {
    let pattern = TriplePattern {
        subject: TermPattern::var("x"),
        predicate: TermPattern::Term(Term::iri(RDF_TYPE)),
        object: TermPattern::Term(Term::iri(class)),
    };
    graph
        .match_pattern(&pattern)
        .into_iter()
        .map(|mut b| b.remove("x").expect("subject variable bound"))
        .collect()
}

fn successors(graph: &Graph, node: &Term, property: &PropertyRef) -> Vec<Term> {
    let (subject, object, out_var) = if property.inverse {
        (TermPattern::var("y"), TermPattern::Term(node.clone()), "y")
    } else {
        (TermPattern::Term(node.clone()), TermPattern::var("y"), "y")
    };
    let pattern = TriplePattern {
        subject,
        predicate: TermPattern::Term(Term::iri(property.iri.clone())),
        object,
    };
    graph
        .match_pattern(&pattern)
        .into_iter()
        .map(|mut b| b.remove(out_var).expect("successor variable bound"))
        .collect()
}

fn has_type(graph: &Graph, term: &Term, class: &str) -> bool {
    if term.is_literal() {
        return false;
    }
    let pattern = TriplePattern {
        subject: TermPattern::Term(term.clone()),
        predicate: TermPattern::Term(Term::iri(RDF_TYPE)),
        object: TermPattern::Term(Term::iri(class.to_string())),
    };
    !graph.match_pattern(&pattern).is_empty()
}
