//! Shared test helpers: small random graphs over a fixed vocabulary and the
//! brute-force oracles the implementation is checked against. Oracles
//! enumerate assignments over the graph's term universe and never call the
//! join/chase/validation code paths they are used to verify.

// each integration test binary compiles this module and uses its own subset
#![allow(dead_code)]

use std::collections::BTreeSet;

use ontokit::chase::{Atom, ExistentialRule};
use ontokit::graph::Graph;
use ontokit::query::ConjunctiveQuery;
use ontokit::term::{Term, TermPattern, Triple, TriplePattern, RDF_TYPE};
use ontokit::vocab::DEFAULT_NAMESPACE;

pub fn ns(local: &str) -> String {
    format!("{DEFAULT_NAMESPACE}{local}")
}

pub fn node(i: usize) -> Term {
    Term::iri(ns(&format!("node{i}")))
}

pub fn predicate(i: usize) -> Term {
    Term::iri(ns(&format!("pred{i}")))
}

pub fn class_iri(i: usize) -> String {
    ns(&format!("Class{i}"))
}

/// Deterministic LCG so oracle suites are reproducible without pulling a
/// dedicated RNG crate into every test file.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed
            .wrapping_mul(2862933555777941757)
            .wrapping_add(3037000493))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound.max(1) as u64) as usize
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }
}

/// Random graph over `node0..node{nodes}`, `pred0..pred{preds}` and a few
/// classes; `nulls` labelled nulls may appear in subject/object position.
pub fn random_graph(
    rng: &mut Lcg,
    triples: usize,
    nodes: usize,
    preds: usize,
    nulls: usize,
) -> Graph {
    let mut g = Graph::new();
    let mut null_terms = Vec::new();
    for _ in 0..nulls {
        null_terms.push(g.fresh_null());
    }
    let pick_node = |rng: &mut Lcg, nulls: &[Term], g_nodes: usize| -> Term {
        let total = g_nodes + nulls.len();
        let i = rng.below(total);
        if i < g_nodes {
            node(i)
        } else {
            nulls[i - g_nodes].clone()
        }
    };
    for _ in 0..triples {
        if rng.chance(1, 4) {
            // type triple
            let subject = pick_node(rng, &null_terms, nodes);
            let class = class_iri(rng.below(3));
            let t = Triple::new(subject, Term::iri(RDF_TYPE), Term::iri(class)).unwrap();
            let _ = g.insert(t);
        } else {
            let subject = pick_node(rng, &null_terms, nodes);
            let object = if rng.chance(1, 8) {
                Term::literal(format!("v{}", rng.below(3)))
            } else {
                pick_node(rng, &null_terms, nodes)
            };
            let t = Triple::new(subject, predicate(rng.below(preds)), object).unwrap();
            let _ = g.insert(t);
        }
    }
    g
}

/// All ground terms of the graph (the candidate universe for oracle
/// enumeration).
pub fn term_universe(graph: &Graph) -> Vec<Term> {
    graph.terms().into_iter().cloned().collect()
}

fn slot_value(slot: &TermPattern, assignment: &[(String, Term)]) -> Option<Term> {
    match slot {
        TermPattern::Term(t) => Some(t.clone()),
        TermPattern::Variable(v) => assignment
            .iter()
            .find(|(name, _)| name == v)
            .map(|(_, t)| t.clone()),
    }
}

fn pattern_holds(graph: &Graph, pattern: &TriplePattern, assignment: &[(String, Term)]) -> bool {
    let (Some(s), Some(p), Some(o)) = (
        slot_value(&pattern.subject, assignment),
        slot_value(&pattern.predicate, assignment),
        slot_value(&pattern.object, assignment),
    ) else {
        return false;
    };
    graph.contains(&Triple {
        subject: s,
        predicate: p,
        object: o,
    })
}

fn query_variables(patterns: &[TriplePattern]) -> Vec<String> {
    let mut vars = Vec::new();
    for p in patterns {
        for v in p.variables() {
            if !vars.iter().any(|existing| existing == v) {
                vars.push(v.to_string());
            }
        }
    }
    vars
}

/// Brute-force query oracle: enumerates every assignment of the query's
/// variables over the graph's term universe and keeps those satisfying all
/// patterns. Exponential, so keep variable counts small in tests.
pub fn oracle_evaluate(graph: &Graph, query: &ConjunctiveQuery) -> BTreeSet<Vec<Term>> {
    let universe = term_universe(graph);
    let vars = query_variables(&query.patterns);
    let mut rows = BTreeSet::new();
    let mut assignment: Vec<(String, Term)> = Vec::with_capacity(vars.len());
    enumerate(graph, query, &universe, &vars, &mut assignment, &mut rows);
    rows
}

fn enumerate(
    graph: &Graph,
    query: &ConjunctiveQuery,
    universe: &[Term],
    vars: &[String],
    assignment: &mut Vec<(String, Term)>,
    rows: &mut BTreeSet<Vec<Term>>,
) {
    if assignment.len() == vars.len() {
        if query
            .patterns
            .iter()
            .all(|p| pattern_holds(graph, p, assignment))
        {
            let row = query
                .projection
                .iter()
                .map(|v| {
                    assignment
                        .iter()
                        .find(|(name, _)| name == v)
                        .map(|(_, t)| t.clone())
                        .expect("projection variable occurs in pattern")
                })
                .collect();
            rows.insert(row);
        }
        return;
    }
    let var = vars[assignment.len()].clone();
    for term in universe {
        assignment.push((var.clone(), term.clone()));
        enumerate(graph, query, universe, vars, assignment, rows);
        assignment.pop();
    }
}

/// Brute-force model check: every body homomorphism of every rule must
/// extend to a head homomorphism. Both searches enumerate raw assignments
/// over the term universe.
pub fn oracle_is_model(graph: &Graph, rules: &[ExistentialRule]) -> bool {
    let universe = term_universe(graph);
    for rule in rules {
        let body_patterns: Vec<TriplePattern> = rule.body.iter().map(Atom::to_pattern).collect();
        let head_patterns: Vec<TriplePattern> = rule.head.iter().map(Atom::to_pattern).collect();
        let body_vars = query_variables(&body_patterns);
        let mut body_assignments = Vec::new();
        collect_assignments(
            graph,
            &body_patterns,
            &universe,
            &body_vars,
            &mut Vec::new(),
            &mut body_assignments,
        );
        for body in body_assignments {
            let head_vars: Vec<String> = query_variables(&head_patterns)
                .into_iter()
                .filter(|v| !body_vars.contains(v))
                .collect();
            let mut satisfied = Vec::new();
            let mut seed = body.clone();
            collect_assignments_with_seed(
                graph,
                &head_patterns,
                &universe,
                &head_vars,
                &mut seed,
                &mut satisfied,
            );
            if satisfied.is_empty() {
                return false;
            }
        }
    }
    true
}

fn collect_assignments(
    graph: &Graph,
    patterns: &[TriplePattern],
    universe: &[Term],
    vars: &[String],
    assignment: &mut Vec<(String, Term)>,
    out: &mut Vec<Vec<(String, Term)>>,
) {
    if assignment.len() == vars.len() {
        if patterns.iter().all(|p| pattern_holds(graph, p, assignment)) {
            out.push(assignment.clone());
        }
        return;
    }
    let var = vars[assignment.len()].clone();
    for term in universe {
        assignment.push((var.clone(), term.clone()));
        collect_assignments(graph, patterns, universe, vars, assignment, out);
        assignment.pop();
    }
}

fn collect_assignments_with_seed(
    graph: &Graph,
    patterns: &[TriplePattern],
    universe: &[Term],
    free_vars: &[String],
    assignment: &mut Vec<(String, Term)>,
    out: &mut Vec<Vec<(String, Term)>>,
) {
    if !out.is_empty() {
        return; // one witness is enough
    }
    let bound = assignment
        .iter()
        .map(|(v, _)| v.clone())
        .collect::<Vec<_>>();
    let next = free_vars.iter().find(|v| !bound.contains(v)).cloned();
    match next {
        None => {
            if patterns.iter().all(|p| pattern_holds(graph, p, assignment)) {
                out.push(assignment.clone());
            }
        }
        Some(var) => {
            for term in universe {
                assignment.push((var.clone(), term.clone()));
                collect_assignments_with_seed(
                    graph, patterns, universe, free_vars, assignment, out,
                );
                assignment.pop();
            }
        }
    }
}

/// Exhaustive isomorphism oracle: tries every permutation of one graph's
/// nulls onto the other's. Only usable for a handful of nulls.
pub fn oracle_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let a_nulls: Vec<Term> = a
        .terms()
        .into_iter()
        .filter(|t| t.is_null())
        .cloned()
        .collect();
    let b_nulls: Vec<Term> = b
        .terms()
        .into_iter()
        .filter(|t| t.is_null())
        .cloned()
        .collect();
    if a_nulls.len() != b_nulls.len() {
        return false;
    }
    let mut indices: Vec<usize> = (0..b_nulls.len()).collect();
    permute(&mut indices, 0, &mut |perm| {
        let map_term = |t: &Term| -> Term {
            if let Some(pos) = a_nulls.iter().position(|n| n == t) {
                b_nulls[perm[pos]].clone()
            } else {
                t.clone()
            }
        };
        a.triples().all(|t| {
            b.contains(&Triple {
                subject: map_term(&t.subject),
                predicate: t.predicate.clone(),
                object: map_term(&t.object),
            })
        })
    })
}

fn permute(indices: &mut Vec<usize>, k: usize, check: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == indices.len() {
        return check(indices);
    }
    for i in k..indices.len() {
        indices.swap(k, i);
        if permute(indices, k + 1, check) {
            indices.swap(k, i);
            return true;
        }
        indices.swap(k, i);
    }
    false
}

pub fn corpus_root() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}
