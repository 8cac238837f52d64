//! Walk a free-text request through read, tokenize, parse and reconstruct.
//!
//!     cargo run --example parse_request -- 'Find cheap hotels near "Stephansplatz" xyzzy'

use soas::fixtures;
use soas::rpu::{parse, read_request, reconstruct, tokenize};

fn main() {
    let raw = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "  Find cheap   hotels in Vienna please ".to_string());
    let lexicon = fixtures::lexicon();

    let normalized = match read_request(&raw) {
        Ok(n) => n,
        Err(e) => return eprintln!("read: {e}"),
    };
    println!("normalized: {normalized:?}");

    let tokens = match tokenize(&normalized, &lexicon) {
        Ok(t) => t,
        Err(e) => return eprintln!("tokenize: {e}"),
    };
    for t in &tokens {
        println!("  {:<14} {:?} {:?}", t.lexeme, t.kind, t.span);
    }

    let rc = match parse(&tokens) {
        Ok(rc) => rc,
        Err(e) => return eprintln!("parse: {e}"),
    };
    println!("head noun: {}", rc.head_noun().lexeme);
    for u in &rc.unrecognized {
        println!("unrecognized: {}", u.lexeme);
    }

    match reconstruct(&rc, &lexicon, &raw, &normalized) {
        Ok(model) => {
            println!("domain: {}\n", model.domain);
            print!("{}", model.serialize());
            println!();
            for p in &model.provenance {
                let words: Vec<_> = p.tokens.iter().map(|t| t.lexeme.as_str()).collect();
                println!("{:<22} <- {:?}", p.triple.predicate().value(), words);
            }
        }
        Err(e) => eprintln!("reconstruct: {e}"),
    }
}
