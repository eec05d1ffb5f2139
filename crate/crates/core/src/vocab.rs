//! IRI constants for the bundled vocabulary.

/// Default namespace for bare names in axiom, rule and map files that do not
/// declare an empty prefix of their own.
pub const DEFAULT_NAMESPACE: &str = "http://example.org/spaceweather#";

/// Default annotation property used to record which pattern a module was
/// instantiated from. Override per map file with an `@annotation` directive.
pub const PATTERN_ANNOTATION: &str =
    "http://ontologydesignpatterns.org/opla#reusesPatternAsTemplate";

pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";

fn ns(local: &str) -> String {
    format!("{DEFAULT_NAMESPACE}{local}")
}

/// Properties of the solar-event response chain.
pub fn requires_response() -> String {
    ns("requiresResponse")
}

pub fn has_first_response() -> String {
    ns("hasFirstResponse")
}

pub fn has_next_response() -> String {
    ns("hasNextResponse")
}
