//! Triples, triple patterns and the in-memory triple store.
//!
//! Everything downstream (agent catalogs, query models, agent knowledge
//! bases) is expressed as plain instance triples. There are no blank nodes
//! and literals carry no datatype or language tag.

mod ntriples;
mod pattern;
mod store;
mod term;

pub use ntriples::{parse_triple_line, parse_triples, serialize_triples, SyntaxError};
pub use pattern::{Bindings, PatternTerm, TriplePattern};
pub use store::TripleStore;
pub use term::{Term, TermKind, Triple};

use thiserror::Error;

/// Well-known vocabulary used across the pipeline.
pub mod vocab {
    pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const REQUEST: &str = "urn:soas:Request";
    pub const ACTION: &str = "urn:soas:action";
    pub const TARGET: &str = "urn:soas:target";
    pub const ATTRIBUTE: &str = "urn:soas:attribute";
    pub const LOCATION: &str = "urn:soas:location";
    pub const NEAR_LOCATION: &str = "urn:soas:nearLocation";
    pub const FEATURE: &str = "urn:soas:feature";
    pub const TOPIC: &str = "urn:soas:topic";
    pub const SERVES_DOMAIN: &str = "urn:soas:servesDomain";
    pub const ENDPOINT: &str = "urn:soas:endpoint";
    pub const TITLE: &str = "urn:soas:title";
    pub const REQUEST_PREFIX: &str = "urn:soas:request:";
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid IRI {0:?}: must be non-empty, scheme-prefixed and free of whitespace")]
    InvalidIri(String),
    #[error("invalid triple: {0} must be an IRI")]
    InvalidTriple(&'static str),
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
}
