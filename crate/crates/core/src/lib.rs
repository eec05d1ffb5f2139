//! A small knowledge-graph toolkit built around an in-memory triple store.
//!
//! The crate provides:
//!
//! - [`term`]/[`graph`]: RDF terms, triples, an indexed graph with pattern
//!   matching, labelled-null generation and isomorphism checking,
//! - [`turtle`]: a reader/writer for the Turtle subset used by the bundled
//!   corpus,
//! - [`axiom`]: a compact text format for SubClassOf axioms, template-based
//!   instantiation of ontology patterns, and compilation of axioms into
//!   inference rules, generating rules and constraints,
//! - [`chase`]: datalog saturation and a restricted chase for existential
//!   rules with labelled nulls,
//! - [`validate`]: closed-world validation of a graph against a compiled
//!   theory, with an optional materialize-first repair mode,
//! - [`query`]: conjunctive (basic-graph-pattern) query evaluation,
//! - [`corpus`]: the bundled, checksummed data artifacts.
//!
//! ```
//! use ontokit::{chase, query, term::PrefixTable, turtle};
//!
//! let mut graph = turtle::parse(
//!     "@prefix : <http://example.org/spaceweather#> .\n\
//!      :event :hasSolarEventType :etype .\n\
//!      :etype :asString \"Solar Flare\" .\n",
//!     None,
//! )?;
//! let rules = chase::parse_rules(
//!     "@prefix : <http://example.org/spaceweather#> .\n\
//!      chain: :hasSolarEventType(e, t), :asString(t, \"Solar Flare\")\n\
//!        -> exists r . :requiresResponse(e, r)\n",
//! )?;
//! let result = chase::chase(&mut graph, &rules.rules, 8)?;
//! assert_eq!(result.nulls_created, 1);
//!
//! let mut prefixes = PrefixTable::new();
//! prefixes.insert("", "http://example.org/spaceweather#");
//! let q = query::parse_query("SELECT ?r WHERE { :event :requiresResponse ?r }", &prefixes)?;
//! assert_eq!(query::evaluate(&graph, &q).len(), 1);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod axiom;
pub mod chase;
pub mod corpus;
pub mod graph;
pub mod lex;
pub mod query;
pub mod term;
pub mod turtle;
pub mod validate;
pub mod vocab;

pub use graph::{isomorphic, Bindings, Graph};
pub use lex::ParseError;
pub use term::{NullOrigin, PrefixTable, Term, TermPattern, Triple, TriplePattern};
