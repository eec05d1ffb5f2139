//! SubClassOf axioms: a compact text format, template-based instantiation of
//! patterns into modules, and compilation into inference rules, generating
//! rules and constraints.
//!
//! The axiom grammar is one axiom per line,
//!
//! ```text
//! dt-03: DataTransformation SubClassOf occursInCE some ComputationalEnvironment
//! dt-19: Data SubClassOf inverse performsInputRole max 1 InputRole
//! ```
//!
//! with keywords `only`, `some`, `min n`, `max n` and `inverse`. Names are
//! bare identifiers (resolved against the empty prefix, or the built-in
//! default namespace when none is declared), prefixed names, or `<IRI>`s.
//! A trailing `[prop term; prop term]` block attaches annotations. `@prefix`
//! directives and `#` comments are allowed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::chase::{Atom, ExistentialRule};
use crate::lex::{escape_string, ParseError, Scanner};
use crate::term::{PrefixTable, Term, TermPattern};
use crate::vocab::{DEFAULT_NAMESPACE, PATTERN_ANNOTATION};

/// A property with an optional inverse marker, as used in restrictions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PropertyRef {
    pub iri: String,
    pub inverse: bool,
}

impl PropertyRef {
    pub fn direct(iri: impl Into<String>) -> Self {
        PropertyRef {
            iri: iri.into(),
            inverse: false,
        }
    }

    pub fn inverse(iri: impl Into<String>) -> Self {
        PropertyRef {
            iri: iri.into(),
            inverse: true,
        }
    }
}

/// Class expressions; fillers are named classes only, which is all the
/// corpus needs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassExpr {
    Named(String),
    AllValues(PropertyRef, String),
    SomeValues(PropertyRef, String),
    MinCard(u32, PropertyRef, String),
    MaxCard(u32, PropertyRef, String),
}

impl ClassExpr {
    /// Shape label used in counting and error messages.
    pub fn shape(&self) -> &'static str {
        match self {
            ClassExpr::Named(_) => "named",
            ClassExpr::AllValues(..) => "all-values",
            ClassExpr::SomeValues(..) => "some-values",
            ClassExpr::MinCard(..) => "min-card",
            ClassExpr::MaxCard(..) => "max-card",
        }
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> ClassExpr {
        let ren = |iri: &String| map.get(iri).cloned().unwrap_or_else(|| iri.clone());
        let ren_prop = |p: &PropertyRef| PropertyRef {
            iri: ren(&p.iri),
            inverse: p.inverse,
        };
        match self {
            ClassExpr::Named(c) => ClassExpr::Named(ren(c)),
            ClassExpr::AllValues(p, c) => ClassExpr::AllValues(ren_prop(p), ren(c)),
            ClassExpr::SomeValues(p, c) => ClassExpr::SomeValues(ren_prop(p), ren(c)),
            ClassExpr::MinCard(n, p, c) => ClassExpr::MinCard(*n, ren_prop(p), ren(c)),
            ClassExpr::MaxCard(n, p, c) => ClassExpr::MaxCard(*n, ren_prop(p), ren(c)),
        }
    }
}

/// One SubClassOf statement with a stable id and optional annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub id: String,
    pub lhs: ClassExpr,
    pub rhs: ClassExpr,
    pub annotations: BTreeSet<(String, Term)>,
}

/// A parsed axiom file: the axioms plus the prefix table their names
/// resolved against (kept for serialization).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomSet {
    pub axioms: Vec<Axiom>,
    pub prefixes: PrefixTable,
}

impl AxiomSet {
    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn by_id(&self, id: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.id == id)
    }
}

pub fn parse_axioms(text: &str) -> Result<AxiomSet, ParseError> {
    let mut prefixes = PrefixTable::new();
    let mut axioms = Vec::new();
    let mut ids = BTreeSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut sc = Scanner::for_line(raw_line, line_no);
        sc.skip_trivia();
        if sc.peek() == Some('@') {
            parse_prefix_line(&mut sc, &mut prefixes)?;
            continue;
        }
        let axiom = parse_axiom_line(&mut sc, &prefixes)?;
        if !ids.insert(axiom.id.clone()) {
            return Err(sc.error("duplicate axiom id", axiom.id));
        }
        axioms.push(axiom);
    }
    Ok(AxiomSet { axioms, prefixes })
}

fn parse_prefix_line(sc: &mut Scanner, prefixes: &mut PrefixTable) -> Result<(), ParseError> {
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

fn parse_axiom_line(sc: &mut Scanner, prefixes: &PrefixTable) -> Result<Axiom, ParseError> {
    let id = sc.scan_name();
    if id.is_empty() {
        let tok = sc.peek().map(|c| c.to_string()).unwrap_or_default();
        return Err(sc.error("expected an axiom id", tok));
    }
    sc.expect(':', "after the axiom id")?;
    sc.skip_trivia();
    let lhs = parse_class_expr(sc, prefixes)?;
    sc.skip_trivia();
    let keyword = sc.scan_name();
    if keyword != "SubClassOf" {
        return Err(sc.error("expected 'SubClassOf'", keyword));
    }
    sc.skip_trivia();
    let rhs = parse_class_expr(sc, prefixes)?;
    sc.skip_trivia();
    let mut annotations = BTreeSet::new();
    if sc.peek() == Some('[') {
        sc.bump();
        loop {
            sc.skip_trivia();
            let prop = parse_name(sc, prefixes)?;
            sc.skip_trivia();
            let value = if sc.peek() == Some('"') {
                Term::literal(sc.scan_string(false)?)
            } else {
                Term::iri(parse_name(sc, prefixes)?)
            };
            annotations.insert((prop, value));
            sc.skip_trivia();
            match sc.peek() {
                Some(';') => {
                    sc.bump();
                }
                Some(']') => {
                    sc.bump();
                    break;
                }
                Some(c) => {
                    return Err(sc.error("expected ';' or ']' in annotations", c.to_string()))
                }
                None => return Err(sc.error("unterminated annotation block", "")),
            }
        }
        sc.skip_trivia();
    }
    if !sc.eof() {
        let tok = sc.peek().map(|c| c.to_string()).unwrap_or_default();
        return Err(sc.error("trailing input after axiom", tok));
    }
    Ok(Axiom {
        id,
        lhs,
        rhs,
        annotations,
    })
}

/// A name is a bare identifier (default namespace), a prefixed name, or an
/// `<IRI>`.
fn parse_name(sc: &mut Scanner, prefixes: &PrefixTable) -> Result<String, ParseError> {
    match sc.peek() {
        Some('<') => sc.scan_iri_ref(),
        Some(':') => {
            sc.bump();
            let local = sc.scan_name();
            expand_default(prefixes, &local).ok_or_else(|| sc.error("undefined prefix", ":"))
        }
        Some(c) if c.is_alphanumeric() || c == '_' => {
            let name = sc.scan_name();
            if sc.peek() == Some(':') {
                sc.bump();
                let local = sc.scan_name();
                prefixes
                    .expand(&name, &local)
                    .ok_or_else(|| sc.error("undefined prefix", format!("{name}:")))
            } else {
                Ok(expand_default(prefixes, &name).expect("default namespace always available"))
            }
        }
        Some(c) => Err(sc.error("expected a name", c.to_string())),
        None => Err(sc.error("unexpected end of line, expected a name", "")),
    }
}

/// Bare names fall back to the built-in default namespace when the file does
/// not declare an empty prefix.
fn expand_default(prefixes: &PrefixTable, local: &str) -> Option<String> {
    match prefixes.namespace("") {
        Some(ns) => Some(format!("{ns}{local}")),
        None => Some(format!("{DEFAULT_NAMESPACE}{local}")),
    }
}

fn parse_class_expr(sc: &mut Scanner, prefixes: &PrefixTable) -> Result<ClassExpr, ParseError> {
    let inverse = if peek_word(sc, "inverse") {
        sc.scan_name();
        sc.skip_trivia();
        true
    } else {
        false
    };
    let first = parse_name(sc, prefixes)?;
    sc.skip_trivia();
    // a restriction keyword after the first name means it was a property
    let keyword_start = sc.peek();
    if matches!(keyword_start, Some(c) if c.is_alphabetic()) {
        let save_restriction = |sc: &mut Scanner,
                                prefixes: &PrefixTable,
                                inverse: bool,
                                prop: String,
                                kw: &str|
         -> Result<ClassExpr, ParseError> {
            let prop = PropertyRef { iri: prop, inverse };
            match kw {
                "only" => {
                    sc.skip_trivia();
                    Ok(ClassExpr::AllValues(prop, parse_name(sc, prefixes)?))
                }
                "some" => {
                    sc.skip_trivia();
                    Ok(ClassExpr::SomeValues(prop, parse_name(sc, prefixes)?))
                }
                "min" | "max" => {
                    sc.skip_trivia();
                    let n = sc.scan_uint()?;
                    sc.skip_trivia();
                    let filler = parse_name(sc, prefixes)?;
                    if kw == "min" {
                        Ok(ClassExpr::MinCard(n, prop, filler))
                    } else {
                        Ok(ClassExpr::MaxCard(n, prop, filler))
                    }
                }
                other => Err(sc.error(
                    "expected 'only', 'some', 'min' or 'max' after a property",
                    other,
                )),
            }
        };
        if peek_word(sc, "only")
            || peek_word(sc, "some")
            || peek_word(sc, "min")
            || peek_word(sc, "max")
        {
            let kw = sc.scan_name();
            return save_restriction(sc, prefixes, inverse, first, &kw);
        }
    }
    if inverse {
        return Err(sc.error("'inverse' must introduce a property restriction", first));
    }
    Ok(ClassExpr::Named(first))
}

fn peek_word(sc: &Scanner, word: &str) -> bool {
    for (i, expected) in word.chars().enumerate() {
        if sc.peek_at(i) != Some(expected) {
            return false;
        }
    }
    !matches!(sc.peek_at(word.len()), Some(c) if c.is_alphanumeric() || c == '_' || c == ':')
}

/// Serializes an axiom set in the same line format `parse_axioms` reads;
/// parsing the output reproduces the axiom list exactly.
pub fn serialize_axioms(set: &AxiomSet) -> String {
    let mut out = String::new();
    for (prefix, ns) in set.prefixes.iter() {
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }
    if !set.prefixes.is_empty() && !set.axioms.is_empty() {
        out.push('\n');
    }
    for axiom in &set.axioms {
        out.push_str(&format!(
            "{}: {} SubClassOf {}",
            axiom.id,
            render_expr(&axiom.lhs, &set.prefixes),
            render_expr(&axiom.rhs, &set.prefixes)
        ));
        if !axiom.annotations.is_empty() {
            let rendered: Vec<String> = axiom
                .annotations
                .iter()
                .map(|(prop, value)| {
                    let value = match value {
                        Term::Literal { lexical, .. } => format!("\"{}\"", escape_string(lexical)),
                        other => render_name(&other.lexical_form(), &set.prefixes),
                    };
                    format!("{} {}", render_name(prop, &set.prefixes), value)
                })
                .collect();
            out.push_str(&format!(" [{}]", rendered.join("; ")));
        }
        out.push('\n');
    }
    out
}

fn render_name(iri: &str, prefixes: &PrefixTable) -> String {
    if let Some(rest) = iri.strip_prefix(DEFAULT_NAMESPACE) {
        if prefixes
            .namespace("")
            .map(|ns| ns == DEFAULT_NAMESPACE)
            .unwrap_or(true)
        {
            return rest.to_string();
        }
    }
    if let Some(ns) = prefixes.namespace("") {
        if let Some(rest) = iri.strip_prefix(ns) {
            return rest.to_string();
        }
    }
    match prefixes.compact(iri) {
        Some((prefix, local)) => format!("{prefix}:{local}"),
        None => format!("<{iri}>"),
    }
}

fn render_expr(expr: &ClassExpr, prefixes: &PrefixTable) -> String {
    let prop = |p: &PropertyRef| {
        let name = render_name(&p.iri, prefixes);
        if p.inverse {
            format!("inverse {name}")
        } else {
            name
        }
    };
    match expr {
        ClassExpr::Named(c) => render_name(c, prefixes),
        ClassExpr::AllValues(p, c) => format!("{} only {}", prop(p), render_name(c, prefixes)),
        ClassExpr::SomeValues(p, c) => format!("{} some {}", prop(p), render_name(c, prefixes)),
        ClassExpr::MinCard(n, p, c) => {
            format!("{} min {} {}", prop(p), n, render_name(c, prefixes))
        }
        ClassExpr::MaxCard(n, p, c) => {
            format!("{} max {} {}", prop(p), n, render_name(c, prefixes))
        }
    }
}

/// An injective IRI-to-IRI renaming plus the provenance of the pattern it
/// instantiates.
#[derive(Debug, Clone)]
pub struct RenameMap {
    mapping: BTreeMap<String, String>,
    pub source_pattern: String,
    pub module_tag: String,
    pub annotation_property: String,
    pub prefixes: PrefixTable,
}

#[derive(Debug, thiserror::Error)]
pub enum TemplateError {
    #[error("rename map is not injective: {0} and {1} both map to {2}")]
    NotInjective(String, String, String),
}

impl RenameMap {
    pub fn new(
        mapping: BTreeMap<String, String>,
        source_pattern: impl Into<String>,
        module_tag: impl Into<String>,
    ) -> Result<Self, TemplateError> {
        check_injective(&mapping)?;
        Ok(RenameMap {
            mapping,
            source_pattern: source_pattern.into(),
            module_tag: module_tag.into(),
            annotation_property: PATTERN_ANNOTATION.to_string(),
            prefixes: PrefixTable::new(),
        })
    }

    pub fn mapping(&self) -> &BTreeMap<String, String> {
        &self.mapping
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }
}

fn check_injective(mapping: &BTreeMap<String, String>) -> Result<(), TemplateError> {
    let mut seen: BTreeMap<&String, &String> = BTreeMap::new();
    for (key, value) in mapping {
        if let Some(previous) = seen.insert(value, key) {
            return Err(TemplateError::NotInjective(
                previous.clone(),
                key.clone(),
                value.clone(),
            ));
        }
    }
    Ok(())
}

/// Parses a rename-map file:
///
/// ```text
/// @prefix : <http://example.org/spaceweather#> .
/// @pattern :DataTransformationPattern .
/// @module sa
/// :DataTransformation -> :SimulationActivity
/// ```
///
/// `@annotation <IRI>` overrides the annotation property used to record the
/// source pattern.
pub fn parse_map(text: &str) -> Result<RenameMap, ParseError> {
    let mut prefixes = PrefixTable::new();
    let mut mapping = BTreeMap::new();
    let mut source_pattern: Option<String> = None;
    let mut module_tag: Option<String> = None;
    let mut annotation_property = PATTERN_ANNOTATION.to_string();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut sc = Scanner::for_line(raw_line, line_no);
        sc.skip_trivia();
        if sc.peek() == Some('@') {
            sc.bump();
            let keyword = sc.scan_name();
            sc.skip_trivia();
            match keyword.as_str() {
                "prefix" => {
                    let prefix = sc.scan_name();
                    sc.expect(':', "after prefix name")?;
                    sc.skip_trivia();
                    let ns = sc.scan_iri_ref()?;
                    sc.skip_trivia();
                    sc.expect('.', "to close the @prefix directive")?;
                    prefixes.insert(prefix, ns);
                }
                "pattern" => {
                    let iri = parse_name(&mut sc, &prefixes)?;
                    sc.skip_trivia();
                    sc.expect('.', "to close the @pattern directive")?;
                    source_pattern = Some(iri);
                }
                "module" => {
                    let tag = sc.scan_name();
                    if tag.is_empty() {
                        return Err(sc.error("expected a module tag", ""));
                    }
                    module_tag = Some(tag);
                }
                "annotation" => {
                    annotation_property = parse_name(&mut sc, &prefixes)?;
                }
                other => return Err(sc.error("unknown directive", format!("@{other}"))),
            }
            continue;
        }
        let from = parse_name(&mut sc, &prefixes)?;
        sc.skip_trivia();
        sc.expect('-', "to begin '->' in a rename entry")?;
        sc.expect('>', "to complete '->' in a rename entry")?;
        sc.skip_trivia();
        let to = parse_name(&mut sc, &prefixes)?;
        mapping.insert(from, to);
    }
    let source_pattern = source_pattern.ok_or_else(|| ParseError {
        line: 1,
        column: 1,
        message: "missing @pattern directive".into(),
        token: String::new(),
    })?;
    let module_tag = module_tag.unwrap_or_else(|| "module".to_string());
    check_injective(&mapping).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
        token: String::new(),
    })?;
    Ok(RenameMap {
        mapping,
        source_pattern,
        module_tag,
        annotation_property,
        prefixes,
    })
}

/// Instantiates a pattern as a module: every IRI that is a key of the map is
/// replaced by its value, every output axiom is annotated with the source
/// pattern, and axiom ids gain the module tag as a suffix. Structure is never
/// changed, only names.
pub fn instantiate_template(set: &AxiomSet, map: &RenameMap) -> AxiomSet {
    let rename_term = |t: &Term| match t {
        Term::Iri(iri) => Term::iri(map.mapping.get(iri).cloned().unwrap_or_else(|| iri.clone())),
        other => other.clone(),
    };
    let axioms = set
        .axioms
        .iter()
        .map(|axiom| {
            let mut annotations: BTreeSet<(String, Term)> = axiom
                .annotations
                .iter()
                .map(|(p, v)| {
                    (
                        map.mapping.get(p).cloned().unwrap_or_else(|| p.clone()),
                        rename_term(v),
                    )
                })
                .collect();
            annotations.insert((
                map.annotation_property.clone(),
                Term::iri(map.source_pattern.clone()),
            ));
            Axiom {
                id: format!("{}-{}", axiom.id, map.module_tag),
                lhs: axiom.lhs.rename(&map.mapping),
                rhs: axiom.rhs.rename(&map.mapping),
                annotations,
            }
        })
        .collect();
    let mut prefixes = set.prefixes.clone();
    prefixes.merge(&map.prefixes);
    AxiomSet { axioms, prefixes }
}

/// Exports a module's annotations as triples: one
/// `(<ns>axiomId, property, value)` triple per annotation, with the axiom id
/// minted into the set's default namespace. This is how provenance
/// annotations travel when a module is shipped as Turtle; the axioms
/// themselves stay in the `.dlx` format.
pub fn annotations_as_graph(set: &AxiomSet) -> crate::graph::Graph {
    let mut graph = crate::graph::Graph::new();
    graph.prefixes_mut().merge(&set.prefixes);
    let ns = set
        .prefixes
        .namespace("")
        .unwrap_or(DEFAULT_NAMESPACE)
        .to_string();
    for axiom in &set.axioms {
        let subject = Term::iri(format!("{ns}{}", axiom.id));
        for (property, value) in &axiom.annotations {
            let triple = crate::term::Triple {
                subject: subject.clone(),
                predicate: Term::iri(property.clone()),
                object: value.clone(),
            };
            let _ = graph.insert(triple);
        }
    }
    graph
}

/// A structural constraint checked by the validator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub axiom_id: String,
    pub kind: ConstraintKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `A ⊑ ∀R.B`: every R-successor of an A-instance must be typed B.
    Range {
        class: String,
        property: PropertyRef,
        filler: String,
    },
    /// `A ⊑ ≤n R.B`: an A-instance has at most n distinct B-typed
    /// R-successors.
    MaxCard {
        class: String,
        property: PropertyRef,
        filler: String,
        limit: u32,
    },
}

/// Informational note for axioms that compile to nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoNote {
    pub axiom_id: String,
    pub message: String,
}

/// The executable form of an axiom set.
///
/// - `inference_rules`: datalog rules (subclass and scoped-domain axioms),
///   always applied before any check,
/// - `generating_rules`: existential rules from `A ⊑ ∃R.B` axioms; the
///   validator treats them as closed-world witness checks or chases them in
///   materialize-first mode,
/// - `constraints`: range and max-cardinality checks,
/// - `informational`: structural tautologies (`min 0`) recorded but not
///   enforced.
#[derive(Debug, Clone, Default)]
pub struct CompiledTheory {
    pub inference_rules: Vec<ExistentialRule>,
    pub generating_rules: Vec<ExistentialRule>,
    pub constraints: Vec<Constraint>,
    pub informational: Vec<InfoNote>,
}

impl CompiledTheory {
    /// Total number of compiled items; equals the axiom count when every
    /// axiom has a supported shape.
    pub fn item_count(&self) -> usize {
        self.inference_rules.len()
            + self.generating_rules.len()
            + self.constraints.len()
            + self.informational.len()
    }
}

#[derive(Debug, thiserror::Error)]
pub struct UnsupportedShape {
    pub axiom_id: String,
    pub detail: String,
}

impl fmt::Display for UnsupportedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "axiom {}: unsupported shape ({})",
            self.axiom_id, self.detail
        )
    }
}

/// Atom for `R(x, y)` honouring the inverse flag: an inverse property walks
/// the triple the other way round.
fn property_atom(property: &PropertyRef, node: &str, filler: &str) -> Atom {
    if property.inverse {
        Atom::property(
            &property.iri,
            TermPattern::var(filler),
            TermPattern::var(node),
        )
    } else {
        Atom::property(
            &property.iri,
            TermPattern::var(node),
            TermPattern::var(filler),
        )
    }
}

pub fn compile(axioms: &[Axiom]) -> Result<CompiledTheory, UnsupportedShape> {
    let mut theory = CompiledTheory::default();
    for axiom in axioms {
        match (&axiom.lhs, &axiom.rhs) {
            (ClassExpr::Named(sub), ClassExpr::Named(sup)) => {
                theory.inference_rules.push(ExistentialRule {
                    id: axiom.id.clone(),
                    body: vec![Atom::class(sub, TermPattern::var("x"))],
                    head: vec![Atom::class(sup, TermPattern::var("x"))],
                    existentials: vec![],
                });
            }
            (ClassExpr::SomeValues(property, filler), ClassExpr::Named(sup)) => {
                // scoped domain: R(x, y) ∧ y:B ⟹ x:A
                theory.inference_rules.push(ExistentialRule {
                    id: axiom.id.clone(),
                    body: vec![
                        property_atom(property, "x", "y"),
                        Atom::class(filler, TermPattern::var("y")),
                    ],
                    head: vec![Atom::class(sup, TermPattern::var("x"))],
                    existentials: vec![],
                });
            }
            (ClassExpr::Named(class), ClassExpr::AllValues(property, filler)) => {
                theory.constraints.push(Constraint {
                    axiom_id: axiom.id.clone(),
                    kind: ConstraintKind::Range {
                        class: class.clone(),
                        property: property.clone(),
                        filler: filler.clone(),
                    },
                });
            }
            (ClassExpr::Named(class), ClassExpr::SomeValues(property, filler))
            | (ClassExpr::Named(class), ClassExpr::MinCard(1, property, filler)) => {
                // dual mode: closed-world witness check / chase generator
                theory.generating_rules.push(ExistentialRule {
                    id: axiom.id.clone(),
                    body: vec![Atom::class(class, TermPattern::var("x"))],
                    head: vec![
                        property_atom(property, "x", "y"),
                        Atom::class(filler, TermPattern::var("y")),
                    ],
                    existentials: vec!["y".to_string()],
                });
            }
            (ClassExpr::Named(_), ClassExpr::MinCard(0, _, _)) => {
                theory.informational.push(InfoNote {
                    axiom_id: axiom.id.clone(),
                    message: format!(
                        "axiom {}: min 0 restriction is a structural tautology; recorded, not enforced",
                        axiom.id
                    ),
                });
            }
            (ClassExpr::Named(class), ClassExpr::MaxCard(limit, property, filler)) => {
                theory.constraints.push(Constraint {
                    axiom_id: axiom.id.clone(),
                    kind: ConstraintKind::MaxCard {
                        class: class.clone(),
                        property: property.clone(),
                        filler: filler.clone(),
                        limit: *limit,
                    },
                });
            }
            (lhs, rhs) => {
                return Err(UnsupportedShape {
                    axiom_id: axiom.id.clone(),
                    detail: format!("{} SubClassOf {}", lhs.shape(), rhs.shape()),
                });
            }
        }
    }
    Ok(theory)
}
