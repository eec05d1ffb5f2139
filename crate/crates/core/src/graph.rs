//! In-memory triple store with set semantics, pattern matching, fresh-null
//! generation and null-bijection isomorphism checking.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::term::{
    NullOrigin, PrefixTable, StructuralError, Term, TermPattern, Triple, TriplePattern,
};

/// Variable bindings produced by pattern matching. BTreeMap keeps the
/// binding tuples ordered, which makes trigger and row ordering reproducible.
pub type Bindings = BTreeMap<String, Term>;

/// Duplicate-free triple set plus prefix table and null counters.
///
/// Iteration over triples is always sorted (by subject, predicate, object
/// lexical forms), so every consumer of the graph is deterministic.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: PrefixTable,
    null_seq: u64,
    blank_seq: u64,
    used_null_ids: HashSet<String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a triple. Returns `Ok(true)` iff the triple was absent before;
    /// re-inserting is a no-op that reports `Ok(false)`. Malformed triples
    /// (literal subject, non-IRI predicate, bad IRI) are rejected.
    pub fn insert(&mut self, triple: Triple) -> Result<bool, StructuralError> {
        triple.check()?;
        for term in [&triple.subject, &triple.object] {
            if let Term::Null { id, .. } = term {
                self.used_null_ids.insert(id.clone());
            }
        }
        Ok(self.triples.insert(triple))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn prefixes(&self) -> &PrefixTable {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixTable {
        &mut self.prefixes
    }

    /// Every distinct term occurring in the graph, sorted.
    pub fn terms(&self) -> BTreeSet<&Term> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            out.insert(&t.subject);
            out.insert(&t.predicate);
            out.insert(&t.object);
        }
        out
    }

    /// A chase-generated null distinct from every term currently in the
    /// graph and from every null previously issued for this graph.
    pub fn fresh_null(&mut self) -> Term {
        loop {
            let id = format!("n{}", self.null_seq);
            self.null_seq += 1;
            if self.used_null_ids.insert(id.clone()) {
                return Term::Null {
                    id,
                    origin: NullOrigin::ChaseGenerated,
                };
            }
        }
    }

    /// Fresh identifier for a parsed blank node (`b…` prefix, disjoint from
    /// the chase's `n…` ids). Used by the parser and by [`Graph::merge`].
    pub fn fresh_blank_id(&mut self) -> String {
        loop {
            let id = format!("b{}", self.blank_seq);
            self.blank_seq += 1;
            if self.used_null_ids.insert(id.clone()) {
                return id;
            }
        }
    }

    /// Merges another graph into this one. The other graph's nulls are
    /// renamed apart so blank labels from separately parsed documents are
    /// never identified by accident.
    pub fn merge(&mut self, other: &Graph) {
        let mut renaming: HashMap<Term, Term> = HashMap::new();
        let rename = |g: &mut Graph, term: &Term, renaming: &mut HashMap<Term, Term>| -> Term {
            match term {
                Term::Null { origin, .. } => renaming
                    .entry(term.clone())
                    .or_insert_with(|| match origin {
                        NullOrigin::ParsedBlank => Term::parsed_blank(g.fresh_blank_id()),
                        NullOrigin::ChaseGenerated => g.fresh_null(),
                    })
                    .clone(),
                _ => term.clone(),
            }
        };
        for t in other.triples() {
            let s = rename(self, &t.subject, &mut renaming);
            let o = rename(self, &t.object, &mut renaming);
            let _ = self.insert(Triple {
                subject: s,
                predicate: t.predicate.clone(),
                object: o,
            });
        }
        self.prefixes.merge(&other.prefixes);
    }

    /// All bindings of the pattern's variables such that the substituted
    /// triple is in the graph, sorted by binding tuple. Repeated variables
    /// must bind to equal terms. A fully ground pattern yields one empty
    /// binding when the triple is present.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> Vec<Bindings> {
        let mut out = Vec::new();
        for triple in &self.triples {
            let mut binding = Bindings::new();
            if unify(&pattern.subject, &triple.subject, &mut binding)
                && unify(&pattern.predicate, &triple.predicate, &mut binding)
                && unify(&pattern.object, &triple.object, &mut binding)
            {
                out.push(binding);
            }
        }
        out.sort_by(|a, b| binding_tuple(a).cmp(&binding_tuple(b)));
        out.dedup();
        out
    }

    /// Joins a conjunction of patterns, starting from `seed` bindings.
    /// Returns the sorted, deduplicated set of solution bindings over all
    /// variables (seed variables included).
    pub fn solve(&self, patterns: &[TriplePattern], seed: &Bindings) -> Vec<Bindings> {
        let mut current = vec![seed.clone()];
        for pattern in patterns {
            let mut next = Vec::new();
            for binding in &current {
                let grounded = substitute_pattern(pattern, binding);
                for found in self.match_pattern(&grounded) {
                    let mut merged = binding.clone();
                    merged.extend(found);
                    next.push(merged);
                }
            }
            current = next;
            if current.is_empty() {
                break;
            }
        }
        current.sort_by(|a, b| binding_tuple(a).cmp(&binding_tuple(b)));
        current.dedup();
        current
    }
}

fn unify(slot: &TermPattern, term: &Term, binding: &mut Bindings) -> bool {
    match slot {
        TermPattern::Term(t) => t == term,
        TermPattern::Variable(v) => match binding.get(v) {
            Some(bound) => bound == term,
            None => {
                binding.insert(v.clone(), term.clone());
                true
            }
        },
    }
}

/// Replaces bound variables in a pattern with their terms.
pub fn substitute_pattern(pattern: &TriplePattern, binding: &Bindings) -> TriplePattern {
    let sub = |slot: &TermPattern| match slot {
        TermPattern::Variable(v) => match binding.get(v) {
            Some(t) => TermPattern::Term(t.clone()),
            None => slot.clone(),
        },
        ground => ground.clone(),
    };
    TriplePattern {
        subject: sub(&pattern.subject),
        predicate: sub(&pattern.predicate),
        object: sub(&pattern.object),
    }
}

fn binding_tuple(b: &Bindings) -> Vec<(&String, String)> {
    b.iter().map(|(k, v)| (k, v.lexical_form())).collect()
}

/// True iff some bijection on null terms maps one graph's triple set exactly
/// onto the other's. IRIs and literals are fixed pointwise; the bijection
/// ignores null origin, so a re-parsed serialization still matches its
/// source. Exhaustive backtracking over the null pairing; fine for the
/// small graphs this toolkit works with.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let a_nulls: Vec<&Term> = a.terms().into_iter().filter(|t| t.is_null()).collect();
    let b_nulls: Vec<&Term> = b.terms().into_iter().filter(|t| t.is_null()).collect();
    if a_nulls.len() != b_nulls.len() {
        return false;
    }
    // Ground triples must coincide exactly.
    for t in a.triples() {
        if !t.subject.is_null() && !t.object.is_null() && !b.contains(t) {
            return false;
        }
    }
    if a_nulls.is_empty() {
        return true;
    }
    // Signature pruning: a null can only map to a null with the same
    // multiset of incident-triple shapes.
    let sig_a: Vec<Vec<String>> = a_nulls.iter().map(|n| null_signature(a, n)).collect();
    let sig_b: Vec<Vec<String>> = b_nulls.iter().map(|n| null_signature(b, n)).collect();
    let candidates: Vec<Vec<usize>> = sig_a
        .iter()
        .map(|sa| {
            (0..b_nulls.len())
                .filter(|&j| &sig_b[j] == sa)
                .collect::<Vec<usize>>()
        })
        .collect();
    let mut assignment: Vec<usize> = Vec::with_capacity(a_nulls.len());
    let mut used = vec![false; b_nulls.len()];
    assign(
        a,
        b,
        &a_nulls,
        &b_nulls,
        &candidates,
        &mut assignment,
        &mut used,
    )
}

fn assign(
    a: &Graph,
    b: &Graph,
    a_nulls: &[&Term],
    b_nulls: &[&Term],
    candidates: &[Vec<usize>],
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let i = assignment.len();
    if i == a_nulls.len() {
        return mapped_triples_match(a, b, a_nulls, b_nulls, assignment);
    }
    for &j in &candidates[i] {
        if used[j] {
            continue;
        }
        assignment.push(j);
        used[j] = true;
        // Prune: triples of `a` all of whose nulls are now assigned must
        // already exist in `b` under the partial map.
        if partial_consistent(a, b, a_nulls, b_nulls, assignment)
            && assign(a, b, a_nulls, b_nulls, candidates, assignment, used)
        {
            return true;
        }
        used[j] = false;
        assignment.pop();
    }
    false
}

fn partial_consistent(
    a: &Graph,
    b: &Graph,
    a_nulls: &[&Term],
    b_nulls: &[&Term],
    assignment: &[usize],
) -> bool {
    let lookup = |term: &Term| -> Option<Term> {
        if !term.is_null() {
            return Some(term.clone());
        }
        let idx = a_nulls
            .iter()
            .position(|n| *n == term)
            .expect("null catalogued");
        if idx < assignment.len() {
            Some((*b_nulls[assignment[idx]]).clone())
        } else {
            None
        }
    };
    for t in a.triples() {
        let (Some(s), Some(o)) = (lookup(&t.subject), lookup(&t.object)) else {
            continue;
        };
        let mapped = Triple {
            subject: s,
            predicate: t.predicate.clone(),
            object: o,
        };
        if !b.contains(&mapped) {
            return false;
        }
    }
    true
}

fn mapped_triples_match(
    a: &Graph,
    b: &Graph,
    a_nulls: &[&Term],
    b_nulls: &[&Term],
    assignment: &[usize],
) -> bool {
    // Counts are equal, so "every mapped triple is in b" implies onto.
    partial_consistent(a, b, a_nulls, b_nulls, assignment)
}

fn null_signature(g: &Graph, null: &Term) -> Vec<String> {
    let mut sig = Vec::new();
    for t in g.triples() {
        let s_here = &t.subject == null;
        let o_here = &t.object == null;
        if !s_here && !o_here {
            continue;
        }
        let part = |term: &Term| {
            if term == null {
                "@".to_string()
            } else if term.is_null() {
                "*".to_string()
            } else {
                term.lexical_form()
            }
        };
        sig.push(format!(
            "{}|{}|{}",
            part(&t.subject),
            t.predicate.lexical_form(),
            part(&t.object)
        ));
    }
    sig.sort();
    sig
}
