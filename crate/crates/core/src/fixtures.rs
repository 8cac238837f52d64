//! Shipped fixture data: the demo lexicon, agent catalog and knowledge bases.

use std::sync::Arc;

use crate::comm::Network;
use crate::locator::{all_agents, Endpoint};
use crate::model::{parse_triples, vocab, Term, Triple, TripleStore};
use crate::rpu::Lexicon;
use crate::runtime::{serve_agent, AgentHandle, BindFailed, KnowledgeBase};

pub const LEXICON: &str = include_str!("../fixtures/lexicon.tsv");
pub const CATALOG: &str = include_str!("../fixtures/catalog.nt");
pub const TRAVEL_A1_KB: &str = include_str!("../fixtures/travel-a1.nt");
pub const TRAVEL_A2_KB: &str = include_str!("../fixtures/travel-a2.nt");
pub const FINANCE_KB: &str = include_str!("../fixtures/finance.nt");

pub fn lexicon() -> Lexicon {
    Lexicon::parse(LEXICON).expect("fixture lexicon is valid")
}

pub fn catalog() -> TripleStore {
    parse_triples(CATALOG).expect("fixture catalog is valid")
}

/// Knowledge base served by each fixture agent.
pub const FIXTURE_AGENTS: [(&str, &str, &str); 3] = [
    ("urn:soas:agent:a1", "travel", TRAVEL_A1_KB),
    ("urn:soas:agent:a2", "travel", TRAVEL_A2_KB),
    ("urn:soas:agent:a3", "finance", FINANCE_KB),
];

/// In-process twin of an agent: `inproc://<last IRI segment>`.
pub fn inproc_twin(agent_iri: &str) -> Endpoint {
    let local = agent_iri.rsplit(':').next().unwrap_or(agent_iri);
    Endpoint::Inproc(local.to_string())
}

/// Start every fixture agent listed in `catalog` on `network`.
///
/// Agents with an inproc endpoint are served there; tcp endpoints are
/// replaced by their inproc twin. Returns the rewritten catalog and the
/// running handles. Catalog agents without a fixture KB are left untouched.
pub async fn spawn_fixture_agents(
    network: &Network,
    catalog: &TripleStore,
) -> Result<(TripleStore, Vec<AgentHandle>), BindFailed> {
    let mut rewritten = TripleStore::new();
    let mut handles = Vec::new();
    let mut served = Vec::new();
    for agent in all_agents(catalog) {
        let Some((_, domain, kb)) = FIXTURE_AGENTS
            .iter()
            .find(|(iri, _, _)| *iri == agent.agent_iri.value())
        else {
            continue;
        };
        if served.contains(&agent.agent_iri) {
            continue;
        }
        let endpoint = match &agent.endpoint {
            Endpoint::Inproc(_) => agent.endpoint.clone(),
            Endpoint::Tcp { .. } => inproc_twin(agent.agent_iri.value()),
        };
        let kb = KnowledgeBase::parse(kb, *domain).expect("fixture knowledge base is valid");
        handles.push(serve_agent(Arc::new(kb), &endpoint, network).await?);
        served.push(agent.agent_iri.clone());
        for t in catalog.with_subject(&agent.agent_iri) {
            if t.predicate().value() == vocab::ENDPOINT {
                rewritten.insert(Triple::from_iris(
                    agent.agent_iri.value(),
                    vocab::ENDPOINT,
                    Term::literal(endpoint.to_string()),
                ));
            }
        }
    }
    for t in catalog.iter() {
        let replaced = t.predicate().value() == vocab::ENDPOINT && served.contains(t.subject());
        if !replaced {
            rewritten.insert(t.clone());
        }
    }
    Ok((rewritten, handles))
}
