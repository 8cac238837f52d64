//! Look up which agents serve a request's domain.
//!
//!     cargo run --example locate_agents -- "find a cheap loan"

use soas::fixtures;
use soas::locator::{all_agents, build_agent_query, locate_agents};
use soas::rpu::process_request;

fn main() {
    let catalog = fixtures::catalog();
    println!("catalog:");
    for a in all_agents(&catalog) {
        println!("  {:<20} {:<8} {}", a.agent_iri.value(), a.domain, a.endpoint);
    }

    let text = std::env::args().nth(1).unwrap_or_else(|| "find cheap hotels in vienna".into());
    let model = match process_request(&text, &fixtures::lexicon()) {
        Ok(m) => m,
        Err((stage, e)) => return eprintln!("{}: {e}", stage.as_str()),
    };
    let query = build_agent_query(&model);
    println!("\n{text:?} -> domain {:?}", query.domain());
    for p in &query.patterns {
        println!("  {p}");
    }
    match locate_agents(&catalog, &query) {
        Ok(agents) => {
            for a in agents {
                println!("  => {} at {}", a.agent_iri.value(), a.endpoint);
            }
        }
        Err(e) => println!("  => {e}"),
    }
}
