//! Conjunctive (basic-graph-pattern) queries over a graph.
//!
//! Query text is a `SELECT ?v … WHERE { tp . tp . … }` subset: triple
//! patterns only, joined by shared variables, plus SPARQL-style `PREFIX`
//! declarations. Rows are the homomorphisms from the pattern into the graph,
//! projected, deduplicated and sorted.

use serde::Serialize;

use crate::graph::{Bindings, Graph};
use crate::lex::{ParseError, Scanner};
use crate::term::{PrefixTable, Term, TermPattern, TriplePattern, RDF_TYPE};

/// A conjunctive query with projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjunctiveQuery {
    pub name: Option<String>,
    pub projection: Vec<String>,
    pub patterns: Vec<TriplePattern>,
}

/// Query results: one column per projected variable, rows sorted by the
/// lexical forms of their terms, no duplicate rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

#[derive(Serialize)]
struct TermJson {
    kind: &'static str,
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    datatype: Option<String>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    columns: &'a [String],
    rows: Vec<Vec<TermJson>>,
}

impl BindingTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// `{"columns": […], "rows": [[{kind, value, datatype?}, …], …]}`.
    /// Nulls come back marked with `"kind": "null"`.
    pub fn to_json(&self) -> String {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|term| match term {
                        Term::Iri(iri) => TermJson {
                            kind: "iri",
                            value: iri.clone(),
                            datatype: None,
                        },
                        Term::Literal { lexical, datatype } => TermJson {
                            kind: "literal",
                            value: lexical.clone(),
                            datatype: datatype.clone(),
                        },
                        Term::Null { id, .. } => TermJson {
                            kind: "null",
                            value: format!("_:{id}"),
                            datatype: None,
                        },
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&TableJson {
            columns: &self.columns,
            rows,
        })
        .expect("binding table serializes")
    }

    /// Aligned-column text rendering; IRIs are compacted against `prefixes`
    /// when possible.
    pub fn to_text(&self, prefixes: Option<&PrefixTable>) -> String {
        let render = |term: &Term| -> String {
            match (term, prefixes) {
                (Term::Iri(iri), Some(table)) => match table.compact(iri) {
                    Some((prefix, local)) => format!("{prefix}:{local}"),
                    None => term.lexical_form(),
                },
                _ => term.lexical_form(),
            }
        };
        let mut cells: Vec<Vec<String>> = Vec::with_capacity(self.rows.len() + 1);
        cells.push(self.columns.iter().map(|c| format!("?{c}")).collect());
        for row in &self.rows {
            cells.push(row.iter().map(render).collect());
        }
        let mut widths = vec![0usize; self.columns.len()];
        for row in &cells {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for (idx, row) in cells.iter().enumerate() {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
            if idx == 0 {
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                out.push_str(rule.join("  ").trim_end());
                out.push('\n');
            }
        }
        out
    }
}

/// Parses the `SELECT … WHERE { … }` subset. Prefixed names resolve against
/// `base_prefixes` extended by any `PREFIX` declarations in the text.
pub fn parse_query(
    text: &str,
    base_prefixes: &PrefixTable,
) -> Result<ConjunctiveQuery, ParseError> {
    let mut sc = Scanner::new(text);
    let mut prefixes = base_prefixes.clone();

    loop {
        sc.skip_trivia();
        if !peek_keyword_ci(&sc, "PREFIX") {
            break;
        }
        sc.scan_name();
        sc.skip_trivia();
        let prefix = sc.scan_name();
        sc.expect(':', "after prefix name")?;
        sc.skip_trivia();
        let ns = sc.scan_iri_ref()?;
        prefixes.insert(prefix, ns);
    }

    sc.skip_trivia();
    if !peek_keyword_ci(&sc, "SELECT") {
        let tok = sc.peek().map(|c| c.to_string()).unwrap_or_default();
        return Err(sc.error("expected SELECT", tok));
    }
    sc.scan_name();

    let mut projection = Vec::new();
    loop {
        sc.skip_trivia();
        if sc.peek() == Some('?') {
            sc.bump();
            let var = sc.scan_name();
            if var.is_empty() {
                return Err(sc.error("expected a variable name after '?'", ""));
            }
            if !projection.contains(&var) {
                projection.push(var);
            }
        } else {
            break;
        }
    }
    if projection.is_empty() {
        let tok = sc.peek().map(|c| c.to_string()).unwrap_or_default();
        return Err(sc.error("SELECT needs at least one ?variable", tok));
    }

    sc.skip_trivia();
    if !peek_keyword_ci(&sc, "WHERE") {
        let tok = sc.peek().map(|c| c.to_string()).unwrap_or_default();
        return Err(sc.error("expected WHERE", tok));
    }
    sc.scan_name();
    sc.skip_trivia();
    sc.expect('{', "to open the pattern block")?;

    let mut patterns = Vec::new();
    loop {
        sc.skip_trivia();
        if sc.peek() == Some('}') {
            sc.bump();
            break;
        }
        if sc.eof() {
            return Err(sc.error("unterminated pattern block, expected '}'", ""));
        }
        let subject = parse_pattern_term(&mut sc, &prefixes, false)?;
        sc.skip_trivia();
        let predicate = parse_pattern_term(&mut sc, &prefixes, true)?;
        sc.skip_trivia();
        let object = parse_pattern_term(&mut sc, &prefixes, false)?;
        let pattern = TriplePattern::new(subject, predicate, object)
            .map_err(|e| sc.error(e.to_string(), ""))?;
        patterns.push(pattern);
        sc.skip_trivia();
        if sc.peek() == Some('.') {
            sc.bump();
        }
    }

    if patterns.is_empty() {
        return Err(sc.error("empty pattern block", "{}"));
    }
    let pattern_vars: Vec<&str> = patterns.iter().flat_map(|p| p.variables()).collect();
    for var in &projection {
        if !pattern_vars.contains(&var.as_str()) {
            return Err(sc.error(
                "projected variable does not occur in the pattern",
                format!("?{var}"),
            ));
        }
    }
    sc.skip_trivia();
    if !sc.eof() {
        let tok = sc.peek().map(|c| c.to_string()).unwrap_or_default();
        return Err(sc.error("trailing input after query", tok));
    }
    Ok(ConjunctiveQuery {
        name: None,
        projection,
        patterns,
    })
}

fn peek_keyword_ci(sc: &Scanner, keyword: &str) -> bool {
    for (i, expected) in keyword.chars().enumerate() {
        match sc.peek_at(i) {
            Some(c) if c.eq_ignore_ascii_case(&expected) => {}
            _ => return false,
        }
    }
    !matches!(sc.peek_at(keyword.len()), Some(c) if c.is_alphanumeric() || c == '_')
}

fn parse_pattern_term(
    sc: &mut Scanner,
    prefixes: &PrefixTable,
    predicate_position: bool,
) -> Result<TermPattern, ParseError> {
    match sc.peek() {
        Some('?') => {
            sc.bump();
            let var = sc.scan_name();
            if var.is_empty() {
                return Err(sc.error("expected a variable name after '?'", ""));
            }
            Ok(TermPattern::var(var))
        }
        Some('<') => Ok(TermPattern::Term(Term::iri(sc.scan_iri_ref()?))),
        Some('"') => {
            if predicate_position {
                return Err(sc.error("literal not allowed as predicate", "\""));
            }
            let value = sc.scan_string(false)?;
            Ok(TermPattern::Term(Term::literal(value)))
        }
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
            if name == "a" && predicate_position && sc.peek() != Some(':') {
                return Ok(TermPattern::Term(Term::iri(RDF_TYPE)));
            }
            if sc.peek() != Some(':') {
                return Err(sc.error("expected a term or ?variable", name));
            }
            sc.bump();
            let local = sc.scan_name();
            let iri = prefixes
                .expand(&name, &local)
                .ok_or_else(|| sc.error("undefined prefix", format!("{name}:")))?;
            Ok(TermPattern::Term(Term::iri(iri)))
        }
        Some(c) => Err(sc.error("expected a term or ?variable", c.to_string())),
        None => Err(sc.error("unexpected end of input in pattern", "")),
    }
}

/// Evaluates a query: rows are exactly the homomorphisms from the pattern
/// into the graph, projected onto the query's variables, deduplicated and
/// sorted. Labelled nulls are legal bindings.
pub fn evaluate(graph: &Graph, query: &ConjunctiveQuery) -> BindingTable {
    let solutions = graph.solve(&query.patterns, &Bindings::new());
    let mut rows: Vec<Vec<Term>> = solutions
        .into_iter()
        .map(|binding| {
            query
                .projection
                .iter()
                .map(|var| {
                    binding
                        .get(var)
                        .cloned()
                        .expect("projection checked at parse")
                })
                .collect()
        })
        .collect();
    rows.sort_by_key(|row| row.iter().map(Term::lexical_form).collect::<Vec<_>>());
    rows.dedup();
    BindingTable {
        columns: query.projection.clone(),
        rows,
    }
}
