//! Serve two agents in-process, fan a query out to them and read back the
//! stored results. The second run points one agent at a dead endpoint.
//!
//!     cargo run --example agent_roundtrip

use std::sync::Arc;
use std::time::Duration;

use soas::comm::{fetch_results, query_agents, Network, ResultStore};
use soas::fixtures;
use soas::locator::{locate_agents, SemanticQuery};
use soas::rpu::process_request;
use soas::runtime::{serve_agent, KnowledgeBase};

#[tokio::main]
async fn main() {
    let network = Network::new();
    let a1 = KnowledgeBase::parse(fixtures::TRAVEL_A1_KB, "travel").unwrap();
    let a2 = KnowledgeBase::parse(fixtures::TRAVEL_A2_KB, "travel").unwrap();
    let _h1 = serve_agent(Arc::new(a1), &"inproc://a1".parse().unwrap(), &network).await.unwrap();
    let _h2 = serve_agent(Arc::new(a2), &"inproc://travel2".parse().unwrap(), &network).await.unwrap();

    let mut agents = locate_agents(&fixtures::catalog(), &SemanticQuery::for_domain("travel")).unwrap();
    agents[0].endpoint = "inproc://a1".parse().unwrap();

    let model = process_request("find cheap hotels in vienna", &fixtures::lexicon()).unwrap();
    let store = ResultStore::in_memory();
    let reports = query_agents(&network, &agents, &model, Duration::from_millis(500), &store)
        .await
        .unwrap();
    for r in &reports {
        println!("{:<20} {}", r.agent.agent_iri.value(), r.outcome);
    }
    for rec in fetch_results(&store, model.request_iri.value()) {
        println!("  #{} {:<18} {:.2} from {}", rec.arrival_index, rec.title, rec.relevance, rec.agent_iri);
    }

    println!("\nwith a1 unreachable:");
    agents[0].endpoint = "inproc://gone".parse().unwrap();
    let other = process_request("find hotels with pool", &fixtures::lexicon()).unwrap();
    let reports = query_agents(&network, &agents, &other, Duration::from_millis(500), &store)
        .await
        .unwrap();
    for r in &reports {
        println!("{:<20} {}", r.agent.agent_iri.value(), r.outcome);
    }
    println!("stored for this request: {}", store.count_for(other.request_iri.value()));
}
