//! Score and rank result records.
//!
//!     cargo run --example ranking

use soas::comm::ResultRecord;
use soas::fixtures;
use soas::model::parse_triples;
use soas::ranking::{rank, score_item, RankConfig};
use soas::rpu::process_request;

fn record(title: &str, triples: &str, relevance: f64, idx: u64, request: &str) -> ResultRecord {
    ResultRecord {
        request_iri: request.into(),
        agent_iri: "urn:soas:agent:demo".into(),
        title: title.into(),
        triples: parse_triples(triples).unwrap(),
        relevance,
        arrival_index: idx,
    }
}

fn main() {
    let model = process_request("find cheap hotels in vienna", &fixtures::lexicon()).unwrap();
    let req = model.request_iri.value();
    let both = "<urn:x:h1> <urn:soas:attribute> <urn:soas:PriceLow> .\n\
                <urn:x:h1> <urn:soas:location> <urn:soas:place:vienna> .\n";
    let one = "<urn:x:h2> <urn:soas:location> <urn:soas:place:vienna> .\n";

    // both constraints met, relevance 0.5: 0.7 * 1.0 + 0.3 * 0.5 = 0.85
    // one constraint met, relevance 0.9:   0.7 * 0.5 + 0.3 * 0.9 = 0.62
    let records = [
        record("one constraint", one, 0.9, 0, req),
        record("both constraints", both, 0.5, 1, req),
        record("nothing", "", 1.0, 2, req),
    ];
    let config = RankConfig::default();
    let scored = records.iter().map(|r| score_item(&model, r, &config)).collect();
    let ranked = rank(scored).unwrap();
    for (i, s) in ranked.results.iter().enumerate() {
        println!(
            "#{}  weight {:.2}  match {:.2}  relevance {:.2}  {}",
            i + 1,
            s.weight,
            s.match_score,
            s.record.relevance,
            s.record.title
        );
    }

    let even = RankConfig { match_coeff: 0.5, relevance_coeff: 0.5 };
    println!("\nwith 0.5 / 0.5:");
    for r in &records {
        let s = score_item(&model, r, &even);
        println!("  {:<17} {:.2}", r.title, s.weight);
    }

    let bad = RankConfig { match_coeff: 0.9, relevance_coeff: 0.3 };
    println!("\n{}", bad.validate().unwrap_err());
}
