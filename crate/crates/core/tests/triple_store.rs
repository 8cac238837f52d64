mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use soas::model::{
    parse_triple_line, parse_triples, serialize_triples, PatternTerm, Term, Triple, TriplePattern, TripleStore,
};

fn arb_term_value() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z]{1,6}".prop_map(|s| format!("urn:x:{s}")),
        Just("http://example.org/a#b".to_string()),
    ]
}

fn arb_literal() -> impl Strategy<Value = String> {
    // quotes, backslashes and non-ASCII all need to survive
    proptest::collection::vec(
        prop_oneof![Just('"'), Just('\\'), Just(' '), Just('é'), Just('ß'), proptest::char::range('a', 'z')],
        0..12,
    )
    .prop_map(|cs| cs.into_iter().collect())
}

fn arb_triple() -> impl Strategy<Value = Triple> {
    (
        arb_term_value(),
        arb_term_value(),
        prop_oneof![arb_term_value().prop_map(|v| Term::iri(v).unwrap()), arb_literal().prop_map(Term::literal)],
    )
        .prop_map(|(s, p, o)| Triple::new(Term::iri(s).unwrap(), Term::iri(p).unwrap(), o).unwrap())
}

proptest! {
    #[test]
    fn serialize_parse_round_trip(triples in proptest::collection::vec(arb_triple(), 0..40)) {
        let store: TripleStore = triples.into_iter().collect();
        let text = serialize_triples(store.iter());
        let back = parse_triples(&text).unwrap();
        prop_assert_eq!(&back, &store);
        prop_assert_eq!(serialize_triples(back.iter()), text);
    }

    #[test]
    fn single_line_round_trip(t in arb_triple()) {
        prop_assert_eq!(parse_triple_line(&t.to_line()).unwrap(), t);
    }

    #[test]
    fn insertion_order_is_irrelevant(mut triples in proptest::collection::vec(arb_triple(), 0..40), seed in any::<u64>()) {
        let a: TripleStore = triples.iter().cloned().collect();
        use rand::seq::SliceRandom;
        triples.shuffle(&mut StdRng::seed_from_u64(seed));
        let b: TripleStore = triples.into_iter().collect();
        prop_assert_eq!(serialize_triples(a.iter()), serialize_triples(b.iter()));
    }

    #[test]
    fn insert_is_idempotent(triples in proptest::collection::vec(arb_triple(), 1..20)) {
        let mut store: TripleStore = triples.iter().cloned().collect();
        let len = store.len();
        for t in &triples {
            prop_assert!(!store.insert(t.clone()));
        }
        prop_assert_eq!(store.len(), len);
    }

    #[test]
    fn match_pattern_equals_brute_force(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let triples = common::random_triples(&mut rng, 300);
        let store: TripleStore = triples.iter().cloned().collect();
        for _ in 0..20 {
            let pattern = common::random_pattern(&mut rng);
            prop_assert_eq!(store.match_pattern(&pattern), common::brute_force_match(&triples, &pattern));
            let hits: Vec<&Triple> = store.matching_triples(&pattern).collect();
            prop_assert_eq!(hits.len(), store.match_pattern(&pattern).len());
        }
    }
}

#[test]
fn repeated_variable_needs_equal_terms() {
    let mut store = TripleStore::new();
    let same = Triple::from_iris("urn:x:a", "urn:x:p", Term::iri("urn:x:a").unwrap());
    let other = Triple::from_iris("urn:x:a", "urn:x:p", Term::iri("urn:x:b").unwrap());
    store.insert(same.clone());
    store.insert(other);
    let x = PatternTerm::var("x").unwrap();
    let pattern = TriplePattern::new(x.clone(), PatternTerm::var("p").unwrap(), x);
    let found: Vec<&Triple> = store.matching_triples(&pattern).collect();
    assert_eq!(found, [&same]);
}

#[test]
fn literal_and_iri_with_same_text_differ() {
    let mut store = TripleStore::new();
    store.insert(Triple::from_iris("urn:x:a", "urn:x:p", Term::iri("urn:x:v").unwrap()));
    store.insert(Triple::from_iris("urn:x:a", "urn:x:p", Term::literal("urn:x:v")));
    assert_eq!(store.len(), 2);
    let pattern = TriplePattern::new(PatternTerm::var("s").unwrap(), Term::iri("urn:x:p").unwrap(), Term::literal("urn:x:v"));
    assert_eq!(store.match_pattern(&pattern).len(), 1);
}

#[test]
fn syntax_errors_carry_position() {
    let err = parse_triples("<urn:x:a> <urn:x:p> <urn:x:o> .\n<urn:x:a> \"p\" <urn:x:o> .\n").unwrap_err();
    assert_eq!((err.line, err.column), (2, 11));
    assert!(parse_triples("# comment only\n\n").unwrap().is_empty());
}
