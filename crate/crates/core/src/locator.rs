//! Agent discovery over the Agent Catalog.
//!
//! The catalog is a triple store in which each agent has one or more
//! `soas:servesDomain` literals and exactly one `soas:endpoint`. Lookup is a
//! two-step forward chain: bind agents by domain, then resolve each bound
//! agent's endpoint.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{
    parse_triples, vocab, Bindings, PatternTerm, SyntaxError, Term, TriplePattern, TripleStore,
};
use crate::rpu::QueryModel;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Tcp { host: String, port: u16 },
    Inproc(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid endpoint {0:?}: expected tcp://host:port or inproc://name")]
pub struct InvalidEndpoint(pub String);

impl FromStr for Endpoint {
    type Err = InvalidEndpoint;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || InvalidEndpoint(s.to_string());
        if let Some(rest) = s.strip_prefix("tcp://") {
            let (host, port) = rest.rsplit_once(':').ok_or_else(invalid)?;
            let port: u16 = port.parse().map_err(|_| invalid())?;
            if host.is_empty() || host.contains(['/', ' ']) {
                return Err(invalid());
            }
            Ok(Self::Tcp {
                host: host.to_string(),
                port,
            })
        } else if let Some(name) = s.strip_prefix("inproc://") {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(invalid());
            }
            Ok(Self::Inproc(name.to_string()))
        } else {
            Err(invalid())
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tcp { host, port } => write!(f, "tcp://{host}:{port}"),
            Self::Inproc(name) => write!(f, "inproc://{name}"),
        }
    }
}

/// Contact information for one agent serving one domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AgentRecord {
    pub agent_iri: Term,
    pub domain: String,
    pub endpoint: Endpoint,
}

/// Domain pattern followed by the endpoint pattern chained on `?a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticQuery {
    pub patterns: [TriplePattern; 2],
}

impl SemanticQuery {
    pub fn for_domain(domain: &str) -> Self {
        let agent = PatternTerm::var("a").expect("valid variable");
        let endpoint = PatternTerm::var("e").expect("valid variable");
        Self {
            patterns: [
                TriplePattern::new(
                    agent.clone(),
                    Term::iri(vocab::SERVES_DOMAIN).expect("vocabulary IRI"),
                    Term::literal(domain),
                ),
                TriplePattern::new(
                    agent,
                    Term::iri(vocab::ENDPOINT).expect("vocabulary IRI"),
                    endpoint,
                ),
            ],
        }
    }

    pub fn domain(&self) -> &str {
        self.patterns[0]
            .object
            .as_term()
            .map(Term::value)
            .unwrap_or_default()
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("catalog entry for {agent} is invalid: {reason}")]
    Invalid { agent: String, reason: String },
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocateError {
    #[error("no agent serves domain {domain:?}")]
    NoAgentsFound { domain: String },
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<TripleStore, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_catalog(&text)
}

pub fn parse_catalog(text: &str) -> Result<TripleStore, CatalogError> {
    let store = parse_triples(text)?;
    validate_catalog(&store)?;
    Ok(store)
}

/// Every agent with a `servesDomain` literal must have exactly one endpoint
/// with a `tcp` or `inproc` scheme.
pub fn validate_catalog(store: &TripleStore) -> Result<(), CatalogError> {
    let serves = TriplePattern::new(
        PatternTerm::var("a").expect("valid variable"),
        Term::iri(vocab::SERVES_DOMAIN).expect("vocabulary IRI"),
        PatternTerm::var("d").expect("valid variable"),
    );
    let mut agents: BTreeMap<&Term, ()> = BTreeMap::new();
    for t in store.matching_triples(&serves) {
        if !t.object().is_literal() {
            return Err(CatalogError::Invalid {
                agent: t.subject().value().to_string(),
                reason: "servesDomain must be a literal".into(),
            });
        }
        agents.insert(t.subject(), ());
    }
    for agent in agents.keys() {
        let invalid = |reason: String| CatalogError::Invalid {
            agent: agent.value().to_string(),
            reason,
        };
        let endpoints: Vec<_> = store
            .with_subject(agent)
            .filter(|t| t.predicate().value() == vocab::ENDPOINT)
            .collect();
        match endpoints.as_slice() {
            [] => return Err(invalid("no endpoint".into())),
            [one] => {
                one.object()
                    .value()
                    .parse::<Endpoint>()
                    .map_err(|e| invalid(e.to_string()))?;
            }
            many => return Err(invalid(format!("{} endpoints, expected one", many.len()))),
        }
    }
    Ok(())
}

pub fn build_agent_query(model: &QueryModel) -> SemanticQuery {
    SemanticQuery::for_domain(&model.domain)
}

/// Resolve the agents serving the query's domain, sorted by agent IRI.
pub fn locate_agents(
    catalog: &TripleStore,
    query: &SemanticQuery,
) -> Result<Vec<AgentRecord>, LocateError> {
    let [by_domain, by_endpoint] = &query.patterns;
    let mut found = Vec::new();
    for first in catalog.match_pattern(by_domain) {
        let chained = by_endpoint.substitute(&first);
        for second in catalog.match_pattern(&chained) {
            let mut bindings: Bindings = first.clone();
            bindings.extend(second);
            let (Some(agent), Some(endpoint)) = (bindings.get("a"), bindings.get("e")) else {
                continue;
            };
            // catalogs are validated on load; skip rather than fail on foreign stores
            let Ok(endpoint) = endpoint.value().parse::<Endpoint>() else {
                continue;
            };
            found.push(AgentRecord {
                agent_iri: agent.clone(),
                domain: query.domain().to_string(),
                endpoint,
            });
        }
    }
    if found.is_empty() {
        return Err(LocateError::NoAgentsFound {
            domain: query.domain().to_string(),
        });
    }
    found.sort_by(|a, b| a.agent_iri.cmp(&b.agent_iri));
    Ok(found)
}

/// Every agent in the catalog with its endpoint, one record per served domain.
pub fn all_agents(catalog: &TripleStore) -> Vec<AgentRecord> {
    let mut domains: Vec<String> = catalog
        .iter()
        .filter(|t| t.predicate().value() == vocab::SERVES_DOMAIN)
        .map(|t| t.object().value().to_string())
        .collect();
    domains.sort();
    domains.dedup();
    let mut out: Vec<AgentRecord> = domains
        .iter()
        .filter_map(|d| locate_agents(catalog, &SemanticQuery::for_domain(d)).ok())
        .flatten()
        .collect();
    out.sort_by(|a, b| (&a.agent_iri, &a.domain).cmp(&(&b.agent_iri, &b.domain)));
    out
}
