//! RDF terms, triples and triple patterns.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::lex::escape_string;

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";

/// How a labelled null entered the graph. Parsed blank nodes and
/// chase-generated nulls share the [`Term::Null`] variant but keep disjoint
/// identifier prefixes (`b…` vs `n…`) so chase provenance stays recoverable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NullOrigin {
    ParsedBlank,
    ChaseGenerated,
}

/// An IRI, a literal, or a labelled null.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(String),
    Literal {
        lexical: String,
        datatype: Option<String>,
    },
    Null {
        id: String,
        origin: NullOrigin,
    },
}

impl Term {
    pub fn iri(s: impl Into<String>) -> Self {
        Term::Iri(s.into())
    }

    /// Plain literal. Plain literals carry the string datatype implicitly,
    /// so `datatype` is normalised to `None` for `xsd:string`.
    pub fn literal(lexical: impl Into<String>) -> Self {
        Term::Literal {
            lexical: lexical.into(),
            datatype: None,
        }
    }

    pub fn typed_literal(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        let datatype = datatype.into();
        Term::Literal {
            lexical: lexical.into(),
            datatype: if datatype == XSD_STRING {
                None
            } else {
                Some(datatype)
            },
        }
    }

    pub fn parsed_blank(id: impl Into<String>) -> Self {
        Term::Null {
            id: id.into(),
            origin: NullOrigin::ParsedBlank,
        }
    }

    pub fn chase_null(id: impl Into<String>) -> Self {
        Term::Null {
            id: id.into(),
            origin: NullOrigin::ChaseGenerated,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Term::Null { .. })
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            _ => None,
        }
    }

    /// Canonical textual form, also the sort key for deterministic iteration:
    /// IRIs print bare, literals quoted (with `^^<dt>` when typed), nulls as
    /// `_:id`.
    pub fn lexical_form(&self) -> String {
        match self {
            Term::Iri(s) => s.clone(),
            Term::Literal {
                lexical,
                datatype: None,
            } => format!("\"{}\"", escape_string(lexical)),
            Term::Literal {
                lexical,
                datatype: Some(dt),
            } => {
                format!("\"{}\"^^<{}>", escape_string(lexical), dt)
            }
            Term::Null { id, .. } => format!("_:{id}"),
        }
    }

    fn variant_rank(&self) -> u8 {
        match self {
            Term::Iri(_) => 0,
            Term::Literal { .. } => 1,
            Term::Null {
                origin: NullOrigin::ParsedBlank,
                ..
            } => 2,
            Term::Null {
                origin: NullOrigin::ChaseGenerated,
                ..
            } => 3,
        }
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lexical_form()
            .cmp(&other.lexical_form())
            .then_with(|| self.variant_rank().cmp(&other.variant_rank()))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lexical_form())
    }
}

/// Structural errors raised when a malformed triple is built or inserted.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructuralError {
    #[error("literal term in subject position: {0}")]
    LiteralSubject(String),
    #[error("triple predicate must be an IRI: {0}")]
    NonIriPredicate(String),
    #[error("malformed IRI (empty or contains whitespace): {0:?}")]
    MalformedIri(String),
}

pub(crate) fn check_iri(iri: &str) -> Result<(), StructuralError> {
    if iri.is_empty() || iri.chars().any(|c| c.is_whitespace()) {
        return Err(StructuralError::MalformedIri(iri.to_string()));
    }
    Ok(())
}

/// A single triple. Predicates are always IRIs and literals never appear in
/// subject position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, StructuralError> {
        let t = Triple {
            subject,
            predicate,
            object,
        };
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<(), StructuralError> {
        match &self.subject {
            Term::Literal { .. } => {
                return Err(StructuralError::LiteralSubject(self.subject.lexical_form()))
            }
            Term::Iri(iri) => check_iri(iri)?,
            Term::Null { .. } => {}
        }
        match &self.predicate {
            Term::Iri(iri) => check_iri(iri)?,
            other => return Err(StructuralError::NonIriPredicate(other.lexical_form())),
        }
        if let Term::Iri(iri) = &self.object {
            check_iri(iri)?;
        }
        Ok(())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

/// A term or a named variable, as it appears in a triple pattern or rule atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermPattern {
    Variable(String),
    Term(Term),
}

impl TermPattern {
    pub fn var(name: impl Into<String>) -> Self {
        TermPattern::Variable(name.into())
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, TermPattern::Variable(_))
    }
}

impl From<Term> for TermPattern {
    fn from(t: Term) -> Self {
        TermPattern::Term(t)
    }
}

/// A triple with variables allowed in any position except that the predicate
/// may never be a literal or a null.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    pub subject: TermPattern,
    pub predicate: TermPattern,
    pub object: TermPattern,
}

impl TriplePattern {
    pub fn new(
        subject: TermPattern,
        predicate: TermPattern,
        object: TermPattern,
    ) -> Result<Self, StructuralError> {
        if let TermPattern::Term(t) = &predicate {
            if !t.is_iri() {
                return Err(StructuralError::NonIriPredicate(t.lexical_form()));
            }
        }
        Ok(TriplePattern {
            subject,
            predicate,
            object,
        })
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for slot in [&self.subject, &self.predicate, &self.object] {
            if let TermPattern::Variable(v) = slot {
                if !out.contains(&v.as_str()) {
                    out.push(v.as_str());
                }
            }
        }
        out
    }
}

/// Prefix table mapping prefix strings (possibly empty) to namespace IRIs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixTable {
    map: BTreeMap<String, String>,
}

impl PrefixTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.map.insert(prefix.into(), namespace.into());
    }

    pub fn namespace(&self, prefix: &str) -> Option<&str> {
        self.map.get(prefix).map(String::as_str)
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Option<String> {
        self.map.get(prefix).map(|ns| format!("{ns}{local}"))
    }

    /// Compacts an IRI against the longest matching namespace. The local part
    /// must be a plain name (letters, digits, `_`, `-`, interior `.`).
    pub fn compact<'a>(&'a self, iri: &'a str) -> Option<(&'a str, &'a str)> {
        let mut best: Option<(&str, &str)> = None;
        for (prefix, ns) in &self.map {
            if let Some(local) = iri.strip_prefix(ns.as_str()) {
                if !local_is_pname_safe(local) {
                    continue;
                }
                if best
                    .map(|(_, b)| ns.len() > iri.len() - b.len())
                    .unwrap_or(true)
                {
                    best = Some((prefix.as_str(), local));
                }
            }
        }
        best
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(p, n)| (p.as_str(), n.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Adds every binding of `other`, overwriting on conflict.
    pub fn merge(&mut self, other: &PrefixTable) {
        for (p, n) in other.iter() {
            self.map.insert(p.to_string(), n.to_string());
        }
    }
}

fn local_is_pname_safe(local: &str) -> bool {
    if local.is_empty() {
        return false;
    }
    let mut chars = local.chars().peekable();
    // leading character must start a name
    match chars.peek() {
        Some(c) if c.is_alphanumeric() || *c == '_' => {}
        _ => return false,
    }
    let last = local.chars().last().unwrap();
    if last == '.' || last == '-' {
        return false;
    }
    local
        .chars()
        .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}
