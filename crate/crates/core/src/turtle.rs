//! Reader and writer for the Turtle subset the corpus uses.
//!
//! Supported: `@prefix` / `@base` directives, prefixed names, absolute IRIs
//! in angle brackets, `a`, predicate lists (`;`), object lists (`,`), blank
//! node labels, short and long (`"""`) string literals with `\"` `\\` `\n`
//! escapes, and `^^` datatypes. Collections `( )` and anonymous blank-node
//! property lists `[ ]` are rejected as unsupported constructs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::graph::Graph;
use crate::lex::{escape_string, ParseError, Scanner};
use crate::term::{PrefixTable, Term, Triple, RDF_TYPE};

#[derive(Clone, Copy, PartialEq)]
enum Position {
    Subject,
    Predicate,
    Object,
}

/// Parses a Turtle document into a fresh graph. Blank node labels are
/// renamed to `b0, b1, …` in order of first occurrence (consistently within
/// the document), which keeps them disjoint from chase-generated nulls.
pub fn parse(text: &str, base_iri: Option<&str>) -> Result<Graph, ParseError> {
    let mut p = Parser {
        sc: Scanner::new(text),
        graph: Graph::new(),
        base: base_iri.map(str::to_string),
        blank_map: HashMap::new(),
    };
    p.run()?;
    Ok(p.graph)
}

struct Parser {
    sc: Scanner,
    graph: Graph,
    base: Option<String>,
    blank_map: HashMap<String, String>,
}

impl Parser {
    fn run(&mut self) -> Result<(), ParseError> {
        loop {
            self.sc.skip_trivia();
            if self.sc.eof() {
                return Ok(());
            }
            if self.sc.peek() == Some('@') {
                self.directive()?;
            } else {
                self.statement()?;
            }
        }
    }

    fn directive(&mut self) -> Result<(), ParseError> {
        self.sc.bump(); // '@'
        let keyword = self.sc.scan_name();
        match keyword.as_str() {
            "prefix" => {
                self.sc.skip_trivia();
                let prefix = self.sc.scan_name();
                self.sc.expect(':', "after prefix name")?;
                self.sc.skip_trivia();
                let ns = self.sc.scan_iri_ref()?;
                let ns = self.resolve(&ns)?;
                self.sc.skip_trivia();
                self.sc.expect('.', "to close the @prefix directive")?;
                self.graph.prefixes_mut().insert(prefix, ns);
                Ok(())
            }
            "base" => {
                self.sc.skip_trivia();
                let base = self.sc.scan_iri_ref()?;
                self.sc.skip_trivia();
                self.sc.expect('.', "to close the @base directive")?;
                self.base = Some(base);
                Ok(())
            }
            other => Err(self.sc.error("unknown directive", format!("@{other}"))),
        }
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        let subject = self.term(Position::Subject)?;
        loop {
            self.sc.skip_trivia();
            let predicate = self.term(Position::Predicate)?;
            loop {
                self.sc.skip_trivia();
                let object = self.term(Position::Object)?;
                let triple = Triple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                };
                self.graph
                    .insert(triple)
                    .map_err(|e| self.sc.error(e.to_string(), ""))?;
                self.sc.skip_trivia();
                if self.sc.peek() == Some(',') {
                    self.sc.bump();
                } else {
                    break;
                }
            }
            match self.sc.peek() {
                Some(';') => {
                    self.sc.bump();
                    self.sc.skip_trivia();
                    // tolerate a trailing ';' before the statement dot
                    if self.sc.peek() == Some('.') {
                        self.sc.bump();
                        return Ok(());
                    }
                }
                Some('.') => {
                    self.sc.bump();
                    return Ok(());
                }
                Some(c) => {
                    return Err(self.sc.error("expected ',', ';' or '.'", c.to_string()));
                }
                None => {
                    return Err(self.sc.error("unexpected end of input, expected '.'", ""));
                }
            }
        }
    }

    fn term(&mut self, position: Position) -> Result<Term, ParseError> {
        match self.sc.peek() {
            Some('<') => {
                let iri = self.sc.scan_iri_ref()?;
                let iri = self.resolve(&iri)?;
                if iri.is_empty() {
                    return Err(self.sc.error("empty IRI reference", "<>"));
                }
                Ok(Term::iri(iri))
            }
            Some('_') if self.sc.peek_at(1) == Some(':') => {
                if position == Position::Predicate {
                    return Err(self.sc.error("blank node not allowed as predicate", "_:"));
                }
                self.sc.bump();
                self.sc.bump();
                let label = self.sc.scan_name();
                if label.is_empty() {
                    return Err(self.sc.error("missing blank node label after '_:'", ""));
                }
                let id = match self.blank_map.get(&label) {
                    Some(id) => id.clone(),
                    None => {
                        let id = self.graph.fresh_blank_id();
                        self.blank_map.insert(label, id.clone());
                        id
                    }
                };
                Ok(Term::parsed_blank(id))
            }
            Some('"') => {
                if position != Position::Object {
                    return Err(self.sc.error("literal not allowed in this position", "\""));
                }
                let value = self.sc.scan_string(true)?;
                if self.sc.peek() == Some('^') && self.sc.peek_at(1) == Some('^') {
                    self.sc.bump();
                    self.sc.bump();
                    let dt = if self.sc.peek() == Some('<') {
                        let raw = self.sc.scan_iri_ref()?;
                        self.resolve(&raw)?
                    } else {
                        self.pname()?
                    };
                    Ok(Term::typed_literal(value, dt))
                } else {
                    Ok(Term::literal(value))
                }
            }
            Some('[') => Err(self.sc.error(
                "unsupported construct: anonymous blank node property list",
                "[",
            )),
            Some('(') => Err(self.sc.error("unsupported construct: collection", "(")),
            Some(c) if c == ':' || c.is_alphanumeric() || c == '_' => {
                if position == Position::Predicate && c == 'a' {
                    // lone `a` expands to rdf:type
                    let name = self.sc.scan_name();
                    if name == "a" && self.sc.peek() != Some(':') {
                        return Ok(Term::iri(RDF_TYPE));
                    }
                    return self.pname_with_scanned_prefix(name).map(Term::iri);
                }
                self.pname().map(Term::iri)
            }
            Some(c) => Err(self.sc.error("expected a term", c.to_string())),
            None => Err(self
                .sc
                .error("unexpected end of input, expected a term", "")),
        }
    }

    fn pname(&mut self) -> Result<String, ParseError> {
        let prefix = self.sc.scan_name();
        self.pname_with_scanned_prefix(prefix)
    }

    fn pname_with_scanned_prefix(&mut self, prefix: String) -> Result<String, ParseError> {
        if self.sc.peek() != Some(':') {
            return Err(self.sc.error("expected ':' in prefixed name", prefix));
        }
        self.sc.bump();
        let local = self.sc.scan_name();
        match self.graph.prefixes().expand(&prefix, &local) {
            Some(iri) => Ok(iri),
            None => Err(self.sc.error("undefined prefix", format!("{prefix}:"))),
        }
    }

    /// Minimal relative-reference handling: anything without a scheme needs
    /// a base, and resolution is plain concatenation against the base's
    /// namespace part.
    fn resolve(&self, iri: &str) -> Result<String, ParseError> {
        if has_scheme(iri) {
            return Ok(iri.to_string());
        }
        match &self.base {
            None => Err(self
                .sc
                .error("relative IRI without a base", format!("<{iri}>"))),
            Some(base) => {
                if base.ends_with('#') || base.ends_with('/') {
                    Ok(format!("{base}{iri}"))
                } else if let Some(rest) = iri.strip_prefix('#') {
                    let stem = base.split('#').next().unwrap_or(base);
                    Ok(format!("{stem}#{rest}"))
                } else {
                    match base.rfind('/') {
                        Some(idx) => Ok(format!("{}{}", &base[..=idx], iri)),
                        None => Ok(format!("{base}/{iri}")),
                    }
                }
            }
        }
    }
}

fn has_scheme(iri: &str) -> bool {
    match iri.find(':') {
        None => false,
        Some(0) => false,
        Some(idx) => iri[..idx]
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '+' || c == '-' || c == '.'),
    }
}

/// Serializes a graph deterministically: prefixes sorted, subjects sorted,
/// predicate and object lists grouped with `;` and `,`. IRIs not covered by
/// the prefix table are emitted in angle brackets. `parse(serialize(g))` is
/// isomorphic to `g`.
pub fn serialize(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, ns) in graph.prefixes().iter() {
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }
    if !graph.prefixes().is_empty() && !graph.is_empty() {
        out.push('\n');
    }

    let mut by_subject: BTreeMap<&Term, BTreeMap<&Term, BTreeSet<&Term>>> = BTreeMap::new();
    for t in graph.triples() {
        by_subject
            .entry(&t.subject)
            .or_default()
            .entry(&t.predicate)
            .or_default()
            .insert(&t.object);
    }

    for (subject, predicates) in by_subject {
        let subj = render_term(subject, graph.prefixes());
        let mut first = true;
        for (predicate, objects) in predicates {
            if first {
                out.push_str(&subj);
                out.push(' ');
                first = false;
            } else {
                out.push_str(" ;\n");
                out.push_str(&" ".repeat(4));
            }
            out.push_str(&render_term(predicate, graph.prefixes()));
            out.push(' ');
            let rendered: Vec<String> = objects
                .iter()
                .map(|o| render_term(o, graph.prefixes()))
                .collect();
            out.push_str(&rendered.join(" , "));
        }
        out.push_str(" .\n");
    }
    out
}

fn render_term(term: &Term, prefixes: &PrefixTable) -> String {
    match term {
        Term::Iri(iri) => match prefixes.compact(iri) {
            Some((prefix, local)) => format!("{prefix}:{local}"),
            None => format!("<{iri}>"),
        },
        Term::Literal {
            lexical,
            datatype: None,
        } => format!("\"{}\"", escape_string(lexical)),
        Term::Literal {
            lexical,
            datatype: Some(dt),
        } => {
            let dt_rendered = match prefixes.compact(dt) {
                Some((prefix, local)) => format!("{prefix}:{local}"),
                None => format!("<{dt}>"),
            };
            format!("\"{}\"^^{}", escape_string(lexical), dt_rendered)
        }
        Term::Null { id, .. } => format!("_:{id}"),
    }
}
