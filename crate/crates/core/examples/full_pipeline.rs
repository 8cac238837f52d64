//! The whole pipeline with the fixture agents, over inproc or tcp.
//!
//!     cargo run --example full_pipeline
//!     cargo run --example full_pipeline -- --tcp "find xyzzy loan"

use std::sync::Arc;

use soas::comm::Network;
use soas::fixtures;
use soas::locator::Endpoint;
use soas::model::{vocab, Term, Triple, TripleStore};
use soas::pipeline::{format_error, format_report, OutputFormat, Pipeline, PipelineConfig};
use soas::runtime::{serve_agent, AgentHandle, KnowledgeBase};

async fn tcp_agents(network: &Network) -> (TripleStore, Vec<AgentHandle>) {
    let mut catalog: TripleStore = fixtures::catalog()
        .iter()
        .filter(|t| t.predicate().value() != vocab::ENDPOINT)
        .cloned()
        .collect();
    let mut handles = Vec::new();
    for (agent, domain, kb) in fixtures::FIXTURE_AGENTS {
        let kb = KnowledgeBase::parse(kb, domain).unwrap();
        let any = Endpoint::Tcp { host: "127.0.0.1".into(), port: 0 };
        let h = serve_agent(Arc::new(kb), &any, network).await.unwrap();
        catalog.insert(Triple::from_iris(agent, vocab::ENDPOINT, Term::literal(h.endpoint().to_string())));
        handles.push(h);
    }
    (catalog, handles)
}

#[tokio::main]
async fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let tcp = args.iter().any(|a| a == "--tcp");
    let text = args
        .iter()
        .find(|a| !a.starts_with("--"))
        .cloned()
        .unwrap_or_else(|| "find cheap hotels in vienna".into());

    let network = Network::new();
    let mut pipeline = Pipeline::from_config(&PipelineConfig::default(), network.clone()).unwrap();
    let (catalog, _agents) = if tcp {
        tcp_agents(&network).await
    } else {
        fixtures::spawn_fixture_agents(&network, pipeline.catalog()).await.unwrap()
    };
    pipeline.set_catalog(catalog).unwrap();

    match pipeline.handle_request(&text).await {
        Ok(report) => {
            print!("{}", format_report(&report, OutputFormat::Text));
            println!();
            print!("{}", format_report(&report, OutputFormat::Json));
        }
        Err(e) => print!("{}", format_error(&e, OutputFormat::Text)),
    }
    for ev in network.call_log() {
        eprintln!("connected to {}", ev.endpoint);
    }
}
