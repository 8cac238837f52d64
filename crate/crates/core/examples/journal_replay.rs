//! Persist results to an append-only journal and replay it on reopen.
//!
//!     cargo run --example journal_replay

use soas::comm::{fetch_results, Network, ResultStore};
use soas::fixtures;
use soas::pipeline::{Pipeline, PipelineConfig};

#[tokio::main]
async fn main() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.jsonl");
    let cfg = PipelineConfig {
        journal_path: Some(path.clone()),
        ..PipelineConfig::default()
    };

    for run in 1..=2 {
        let network = Network::new();
        let mut p = Pipeline::from_config(&cfg, network.clone()).unwrap();
        let (catalog, _agents) = fixtures::spawn_fixture_agents(&network, p.catalog()).await.unwrap();
        p.set_catalog(catalog).unwrap();
        let report = p.handle_request("find cheap hotels in vienna").await.unwrap();
        println!(
            "run {run}: {} ranked results, {} records in the journal",
            report.results.len(),
            p.store().len()
        );
    }

    let store = ResultStore::open_journal(&path).unwrap();
    let request = "urn:soas:request:9785ccd17f938c4a";
    for r in fetch_results(&store, request) {
        println!("  #{:<2} {:<16} {}", r.arrival_index, r.title, r.agent_iri);
    }
    println!("\nfirst journal line:");
    let text = std::fs::read_to_string(&path).unwrap();
    println!("{}", text.lines().next().unwrap_or_default());
}
