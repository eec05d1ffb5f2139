//! Forward chaining: datalog saturation to fixpoint, then a restricted chase
//! of existential rules with labelled nulls.
//!
//! The chase is *restricted* (standard): a trigger fires only if no extension
//! of its body homomorphism already satisfies the whole head inside the
//! graph. Each firing instantiates every existential variable with one fresh
//! null. Triggers are processed in sorted order (rules by id, homomorphisms
//! by binding tuple), so runs are reproducible.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::{Bindings, Graph};
use crate::lex::{ParseError, Scanner};
use crate::term::{PrefixTable, Term, TermPattern, Triple, TriplePattern, RDF_TYPE};
use crate::vocab;

/// A body or head atom: a property between two arguments or a class
/// membership assertion. Arguments are terms or named variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Property {
        property: String,
        subject: TermPattern,
        object: TermPattern,
    },
    Type {
        class: String,
        arg: TermPattern,
    },
}

impl Atom {
    pub fn property(
        property: impl Into<String>,
        subject: TermPattern,
        object: TermPattern,
    ) -> Self {
        Atom::Property {
            property: property.into(),
            subject,
            object,
        }
    }

    pub fn class(class: impl Into<String>, arg: TermPattern) -> Self {
        Atom::Type {
            class: class.into(),
            arg,
        }
    }

    pub fn to_pattern(&self) -> TriplePattern {
        match self {
            Atom::Property {
                property,
                subject,
                object,
            } => TriplePattern {
                subject: subject.clone(),
                predicate: TermPattern::Term(Term::iri(property.clone())),
                object: object.clone(),
            },
            Atom::Type { class, arg } => TriplePattern {
                subject: arg.clone(),
                predicate: TermPattern::Term(Term::iri(RDF_TYPE)),
                object: TermPattern::Term(Term::iri(class.clone())),
            },
        }
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let slots: [&TermPattern; 2] = match self {
            Atom::Property {
                subject, object, ..
            } => [subject, object],
            Atom::Type { arg, .. } => [arg, arg],
        };
        for slot in slots {
            if let TermPattern::Variable(v) = slot {
                if !out.contains(&v.as_str()) {
                    out.push(v.as_str());
                }
            }
        }
        out
    }
}

/// An existential rule: non-empty body, head whose variables are either
/// frontier (shared with the body) or listed as existential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistentialRule {
    pub id: String,
    pub body: Vec<Atom>,
    pub head: Vec<Atom>,
    pub existentials: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum RuleError {
    #[error("rule {0}: body must be non-empty")]
    EmptyBody(String),
    #[error(
        "rule {id}: head variable {var:?} is neither a body variable nor declared existential"
    )]
    UnboundHeadVariable { id: String, var: String },
    #[error("rule {id}: existential variable {var:?} also occurs in the body")]
    ExistentialInBody { id: String, var: String },
    #[error("rule {id} has existential variables and cannot be used for saturation")]
    ExistentialInSaturation { id: String },
    #[error("max_rounds must be at least 1")]
    InvalidMaxRounds,
    #[error("rule {id}: firing produced a malformed triple: {source}")]
    MalformedHeadTriple {
        id: String,
        #[source]
        source: crate::term::StructuralError,
    },
}

impl ExistentialRule {
    pub fn validate(&self) -> Result<(), RuleError> {
        if self.body.is_empty() {
            return Err(RuleError::EmptyBody(self.id.clone()));
        }
        let body_vars: BTreeSet<&str> = self.body.iter().flat_map(|a| a.variables()).collect();
        for var in &self.existentials {
            if body_vars.contains(var.as_str()) {
                return Err(RuleError::ExistentialInBody {
                    id: self.id.clone(),
                    var: var.clone(),
                });
            }
        }
        for atom in &self.head {
            for var in atom.variables() {
                if !body_vars.contains(var) && !self.existentials.iter().any(|e| e == var) {
                    return Err(RuleError::UnboundHeadVariable {
                        id: self.id.clone(),
                        var: var.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_datalog(&self) -> bool {
        self.existentials.is_empty()
    }

    fn body_patterns(&self) -> Vec<TriplePattern> {
        self.body.iter().map(Atom::to_pattern).collect()
    }

    fn head_patterns(&self) -> Vec<TriplePattern> {
        self.head.iter().map(Atom::to_pattern).collect()
    }
}

/// A parsed rule file: the rules plus the prefix table their names resolved
/// against.
#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    pub rules: Vec<ExistentialRule>,
    pub prefixes: PrefixTable,
}

/// Outcome of a saturation or chase run.
#[derive(Debug, Clone)]
pub struct ChaseResult {
    pub added: Vec<Triple>,
    pub nulls_created: usize,
    pub rounds: usize,
    pub terminated: bool,
}

#[derive(Serialize)]
struct ChaseResultJson {
    added: usize,
    nulls: usize,
    rounds: usize,
    terminated: bool,
}

impl ChaseResult {
    pub fn added_count(&self) -> usize {
        self.added.len()
    }

    /// `{"added": …, "nulls": …, "rounds": …, "terminated": …}`
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ChaseResultJson {
            added: self.added.len(),
            nulls: self.nulls_created,
            rounds: self.rounds,
            terminated: self.terminated,
        })
        .expect("chase result serializes")
    }
}

/// Parses the rule text format:
///
/// ```text
/// id: atom, atom -> exists v1, v2 . atom, atom
/// ```
///
/// Atoms are `prop(x, y)` or `type(x, Class)`; `prop` and `Class` are
/// prefixed names or `<IRI>`s, constants are prefixed names, `<IRI>`s or
/// quoted strings, and bare identifiers are variables. A rule without an
/// `exists` clause is plain datalog. `@prefix` directives and `#` comments
/// may appear between rules.
pub fn parse_rules(text: &str) -> Result<RuleSet, ParseError> {
    let mut sc = Scanner::new(text);
    let mut prefixes = PrefixTable::new();
    let mut rules: Vec<ExistentialRule> = Vec::new();
    loop {
        sc.skip_trivia();
        if sc.eof() {
            break;
        }
        if sc.peek() == Some('@') {
            parse_prefix_directive(&mut sc, &mut prefixes)?;
            continue;
        }
        let id = sc.scan_name();
        if id.is_empty() {
            let tok = sc.peek().map(|c| c.to_string()).unwrap_or_default();
            return Err(sc.error("expected a rule id", tok));
        }
        sc.expect(':', "after the rule id")?;
        let mut body = Vec::new();
        loop {
            sc.skip_trivia();
            body.push(parse_atom(&mut sc, &prefixes)?);
            sc.skip_trivia();
            if sc.peek() == Some(',') {
                sc.bump();
            } else {
                break;
            }
        }
        sc.skip_trivia();
        sc.expect('-', "to begin '->' between body and head")?;
        sc.expect('>', "to complete '->' between body and head")?;
        sc.skip_trivia();
        let mut existentials = Vec::new();
        if peek_keyword(&sc, "exists") {
            sc.scan_name();
            loop {
                sc.skip_trivia();
                let var = sc.scan_name();
                if var.is_empty() {
                    let tok = sc.peek().map(|c| c.to_string()).unwrap_or_default();
                    return Err(sc.error("expected an existential variable name", tok));
                }
                existentials.push(var);
                sc.skip_trivia();
                if sc.peek() == Some(',') {
                    sc.bump();
                } else {
                    break;
                }
            }
            sc.expect('.', "after the existential variable list")?;
        }
        let mut head = Vec::new();
        loop {
            sc.skip_trivia();
            head.push(parse_atom(&mut sc, &prefixes)?);
            sc.skip_trivia();
            if sc.peek() == Some(',') {
                sc.bump();
            } else {
                break;
            }
        }
        let rule = ExistentialRule {
            id,
            body,
            head,
            existentials,
        };
        rule.validate().map_err(|e| sc.error(e.to_string(), ""))?;
        rules.push(rule);
    }
    Ok(RuleSet { rules, prefixes })
}

fn parse_prefix_directive(sc: &mut Scanner, prefixes: &mut PrefixTable) -> Result<(), ParseError> {
    sc.bump(); // '@'
    let keyword = sc.scan_name();
    if keyword != "prefix" {
        return Err(sc.error("unknown directive", format!("@{keyword}")));
    }
    sc.skip_trivia();
    let prefix = sc.scan_name();
    sc.expect(':', "after prefix name")?;
    sc.skip_trivia();
    let ns = sc.scan_iri_ref()?;
    sc.skip_trivia();
    sc.expect('.', "to close the @prefix directive")?;
    prefixes.insert(prefix, ns);
    Ok(())
}

fn peek_keyword(sc: &Scanner, keyword: &str) -> bool {
    for (i, expected) in keyword.chars().enumerate() {
        if sc.peek_at(i) != Some(expected) {
            return false;
        }
    }
    // must not continue as a longer name
    !matches!(sc.peek_at(keyword.len()), Some(c) if c.is_alphanumeric() || c == '_' || c == ':')
}

fn parse_atom(sc: &mut Scanner, prefixes: &PrefixTable) -> Result<Atom, ParseError> {
    if peek_keyword(sc, "type") {
        sc.scan_name();
        sc.skip_trivia();
        sc.expect('(', "after 'type'")?;
        sc.skip_trivia();
        let arg = parse_arg(sc, prefixes)?;
        sc.skip_trivia();
        sc.expect(',', "between the argument and the class")?;
        sc.skip_trivia();
        let class = parse_iri_name(sc, prefixes)?;
        sc.skip_trivia();
        sc.expect(')', "to close the atom")?;
        return Ok(Atom::Type { class, arg });
    }
    let property = parse_iri_name(sc, prefixes)?;
    sc.skip_trivia();
    sc.expect('(', "after the property name")?;
    sc.skip_trivia();
    let subject = parse_arg(sc, prefixes)?;
    sc.skip_trivia();
    sc.expect(',', "between atom arguments")?;
    sc.skip_trivia();
    let object = parse_arg(sc, prefixes)?;
    sc.skip_trivia();
    sc.expect(')', "to close the atom")?;
    Ok(Atom::Property {
        property,
        subject,
        object,
    })
}

/// Property or class position: `<IRI>` or a prefixed name.
fn parse_iri_name(sc: &mut Scanner, prefixes: &PrefixTable) -> Result<String, ParseError> {
    match sc.peek() {
        Some('<') => sc.scan_iri_ref(),
        Some(c) if c == ':' || c.is_alphanumeric() || c == '_' => {
            let prefix = if c == ':' {
                String::new()
            } else {
                sc.scan_name()
            };
            if sc.peek() != Some(':') {
                return Err(sc.error(
                    "expected a prefixed name or <IRI> (bare identifiers are variables)",
                    prefix,
                ));
            }
            sc.bump();
            let local = sc.scan_name();
            prefixes
                .expand(&prefix, &local)
                .ok_or_else(|| sc.error("undefined prefix", format!("{prefix}:")))
        }
        Some(c) => Err(sc.error("expected a property or class name", c.to_string())),
        None => Err(sc.error("unexpected end of input in atom", "")),
    }
}

/// Argument position: variable (bare identifier), prefixed name, `<IRI>` or
/// quoted string.
fn parse_arg(sc: &mut Scanner, prefixes: &PrefixTable) -> Result<TermPattern, ParseError> {
    match sc.peek() {
        Some('<') => Ok(TermPattern::Term(Term::iri(sc.scan_iri_ref()?))),
        Some('"') => Ok(TermPattern::Term(Term::literal(sc.scan_string(false)?))),
        Some(':') => {
            sc.bump();
            let local = sc.scan_name();
            let iri = prefixes
                .expand("", &local)
                .ok_or_else(|| sc.error("undefined prefix", ":"))?;
            Ok(TermPattern::Term(Term::iri(iri)))
        }
        Some(c) if c.is_alphanumeric() || c == '_' => {
            let name = sc.scan_name();
            if sc.peek() == Some(':') {
                sc.bump();
                let local = sc.scan_name();
                let iri = prefixes
                    .expand(&name, &local)
                    .ok_or_else(|| sc.error("undefined prefix", format!("{name}:")))?;
                Ok(TermPattern::Term(Term::iri(iri)))
            } else {
                Ok(TermPattern::var(name))
            }
        }
        Some(c) => Err(sc.error("expected an atom argument", c.to_string())),
        None => Err(sc.error("unexpected end of input in atom", "")),
    }
}

/// Applies datalog rules to fixpoint. Rules must have no existential
/// variables; the fixpoint is independent of rule order.
pub fn saturate(graph: &mut Graph, rules: &[ExistentialRule]) -> Result<ChaseResult, RuleError> {
    for rule in rules {
        if !rule.is_datalog() {
            return Err(RuleError::ExistentialInSaturation {
                id: rule.id.clone(),
            });
        }
    }
    // Datalog saturation terminates: every firing adds a triple over existing
    // terms, and the space of such triples is finite.
    chase_inner(graph, rules, usize::MAX)
}

/// Runs the restricted chase for up to `max_rounds` rounds. A round with zero
/// firings means the graph is a model of the rules (`terminated = true`);
/// exhausting the budget is reported via `terminated = false`, not an error.
pub fn chase(
    graph: &mut Graph,
    rules: &[ExistentialRule],
    max_rounds: usize,
) -> Result<ChaseResult, RuleError> {
    if max_rounds == 0 {
        return Err(RuleError::InvalidMaxRounds);
    }
    chase_inner(graph, rules, max_rounds)
}

fn chase_inner(
    graph: &mut Graph,
    rules: &[ExistentialRule],
    max_rounds: usize,
) -> Result<ChaseResult, RuleError> {
    for rule in rules {
        rule.validate()?;
    }
    let mut ordered: Vec<&ExistentialRule> = rules.iter().collect();
    ordered.sort_by(|a, b| a.id.cmp(&b.id));

    let mut added = Vec::new();
    let mut nulls_created = 0usize;
    let mut rounds = 0usize;
    let mut terminated = false;

    while rounds < max_rounds {
        rounds += 1;
        let mut fired = 0usize;
        for rule in &ordered {
            let matches = graph.solve(&rule.body_patterns(), &Bindings::new());
            for binding in matches {
                // Restricted-chase trigger test against the live graph, so a
                // firing earlier in the round already counts as satisfying.
                if head_satisfied(graph, rule, &binding) {
                    continue;
                }
                // A conclusion that would put a literal in subject position
                // is outside the triple syntax; such triggers never fire
                // (same policy as rule materializers that drop generalized
                // triples).
                if !head_expressible(rule, &binding) {
                    continue;
                }
                fired += 1;
                let mut extended = binding.clone();
                for var in &rule.existentials {
                    extended.insert(var.clone(), graph.fresh_null());
                    nulls_created += 1;
                }
                for atom in &rule.head {
                    let triple = instantiate(atom, &extended).map_err(|source| {
                        RuleError::MalformedHeadTriple {
                            id: rule.id.clone(),
                            source,
                        }
                    })?;
                    if graph.insert(triple.clone()).map_err(|source| {
                        RuleError::MalformedHeadTriple {
                            id: rule.id.clone(),
                            source,
                        }
                    })? {
                        added.push(triple);
                    }
                }
            }
        }
        if fired == 0 {
            terminated = true;
            break;
        }
    }
    Ok(ChaseResult {
        added,
        nulls_created,
        rounds,
        terminated,
    })
}

/// True iff some extension of `binding` maps every head atom into the graph.
fn head_satisfied(graph: &Graph, rule: &ExistentialRule, binding: &Bindings) -> bool {
    !graph.solve(&rule.head_patterns(), binding).is_empty()
}

/// A trigger is expressible when no head atom would end up with a literal in
/// subject position. Existential variables become nulls, so only frontier
/// bindings and constants can offend.
fn head_expressible(rule: &ExistentialRule, binding: &Bindings) -> bool {
    rule.head.iter().all(|atom| {
        let subject_slot = match atom {
            Atom::Property { subject, .. } => subject,
            Atom::Type { arg, .. } => arg,
        };
        match subject_slot {
            TermPattern::Term(t) => !t.is_literal(),
            TermPattern::Variable(v) => binding.get(v).map(|t| !t.is_literal()).unwrap_or(true),
        }
    })
}

fn instantiate(atom: &Atom, binding: &Bindings) -> Result<Triple, crate::term::StructuralError> {
    let ground = |slot: &TermPattern| -> Term {
        match slot {
            TermPattern::Term(t) => t.clone(),
            TermPattern::Variable(v) => binding
                .get(v)
                .cloned()
                .expect("validated rule binds every head variable"),
        }
    };
    let pattern = atom.to_pattern();
    Triple::new(
        ground(&pattern.subject),
        ground(&pattern.predicate),
        ground(&pattern.object),
    )
}

/// Body homomorphisms of `rule` with no head extension in `graph`. The
/// validator uses this for closed-world witness checks; on a terminated
/// chase output it is empty for every rule that ran.
pub fn unsatisfied_triggers(graph: &Graph, rule: &ExistentialRule) -> Vec<Bindings> {
    graph
        .solve(&rule.body_patterns(), &Bindings::new())
        .into_iter()
        .filter(|binding| !head_satisfied(graph, rule, binding))
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum ChainError {
    #[error("response chain branches at {0}: multiple next responses")]
    Branching(String),
    #[error("response chain contains a cycle through {0}")]
    Cycle(String),
}

/// Follows `requiresResponse` → `hasFirstResponse` → `hasNextResponse*` from
/// a solar event and returns the responses in chain order. Events with no
/// attached response yield an empty chain. Branching (two next-responses) and
/// cycles are errors; when an event requires several sequential responses the
/// lexically first is followed.
pub fn response_chain(graph: &Graph, solar_event: &Term) -> Result<Vec<Term>, ChainError> {
    let successors = |node: &Term, property: String| -> Vec<Term> {
        let pattern = TriplePattern {
            subject: TermPattern::Term(node.clone()),
            predicate: TermPattern::Term(Term::iri(property)),
            object: TermPattern::var("o"),
        };
        graph
            .match_pattern(&pattern)
            .into_iter()
            .map(|mut b| b.remove("o").expect("object variable bound"))
            .collect()
    };

    let sequential = match successors(solar_event, vocab::requires_response()).first() {
        Some(s) => s.clone(),
        None => return Ok(Vec::new()),
    };
    let mut current = match successors(&sequential, vocab::has_first_response()).first() {
        Some(r) => r.clone(),
        None => return Ok(Vec::new()),
    };
    let mut chain = vec![current.clone()];
    let mut seen: BTreeSet<Term> = chain.iter().cloned().collect();
    loop {
        let next = successors(&current, vocab::has_next_response());
        match next.len() {
            0 => return Ok(chain),
            1 => {
                let next = next.into_iter().next().unwrap();
                if !seen.insert(next.clone()) {
                    return Err(ChainError::Cycle(next.lexical_form()));
                }
                chain.push(next.clone());
                current = next;
            }
            _ => return Err(ChainError::Branching(current.lexical_form())),
        }
    }
}
