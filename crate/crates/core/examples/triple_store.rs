//! Parse triples, query them with patterns, write them back out.
//!
//!     cargo run --example triple_store

use soas::fixtures;
use soas::model::{parse_triples, serialize_triples, PatternTerm, Term, TriplePattern};

fn main() {
    let store = parse_triples(fixtures::TRAVEL_A1_KB).expect("fixture parses");
    println!("{} triples in the a1 knowledge base", store.len());

    // every hotel in vienna, with its title
    let in_vienna = TriplePattern::new(
        PatternTerm::var("h").unwrap(),
        Term::iri("urn:soas:location").unwrap(),
        Term::iri("urn:soas:place:vienna").unwrap(),
    );
    let title = TriplePattern::new(
        PatternTerm::var("h").unwrap(),
        Term::iri("urn:soas:title").unwrap(),
        PatternTerm::var("t").unwrap(),
    );
    println!("\n{in_vienna}");
    for b in store.match_pattern(&in_vienna) {
        for row in store.match_pattern(&title.substitute(&b)) {
            println!("  {} -> {}", b["h"].value(), row["t"].value());
        }
    }

    let flights: Vec<_> = store
        .iter()
        .filter(|t| t.object().value() == "urn:soas:Flight")
        .collect();
    println!("\nflights, serialized:\n{}", serialize_triples(flights));
}
