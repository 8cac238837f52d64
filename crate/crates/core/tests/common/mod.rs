//! Generators, brute-force oracles and fixture harnesses shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use tokio::io::{AsyncWriteExt, BufReader};

use soas::comm::wire::{peek_id, read_line};
use soas::comm::{Network, ResultRecord};
use soas::fixtures;
use soas::locator::Endpoint;
use soas::model::{vocab, Bindings, PatternTerm, Term, Triple, TriplePattern, TripleStore};
use soas::pipeline::{Pipeline, PipelineConfig};
use soas::ranking::{RankConfig, ScoredResult};
use soas::runtime::{serve_agent, AgentHandle, KnowledgeBase};

// ---------------------------------------------------------------- triples

pub fn iri(v: &str) -> Term {
    Term::iri(v).unwrap()
}

fn random_iri(rng: &mut StdRng, prefix: &str, n: usize) -> Term {
    iri(&format!("urn:t:{prefix}{}", rng.gen_range(0..n)))
}

fn random_object(rng: &mut StdRng) -> Term {
    match rng.gen_range(0..3) {
        0 => random_iri(rng, "s", 12),
        1 => random_iri(rng, "o", 8),
        // literals share values with IRIs so kind matters
        _ => Term::literal(format!("urn:t:o{}", rng.gen_range(0..8))),
    }
}

pub fn random_triple(rng: &mut StdRng) -> Triple {
    Triple::new(random_iri(rng, "s", 12), random_iri(rng, "p", 5), random_object(rng)).unwrap()
}

pub fn random_triples(rng: &mut StdRng, max: usize) -> Vec<Triple> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| random_triple(rng)).collect()
}

fn random_slot(rng: &mut StdRng, concrete: Term) -> PatternTerm {
    if rng.gen_bool(0.5) {
        PatternTerm::var(["a", "b", "c"][rng.gen_range(0..3)]).unwrap()
    } else {
        PatternTerm::Term(concrete)
    }
}

pub fn random_pattern(rng: &mut StdRng) -> TriplePattern {
    let s = random_iri(rng, "s", 12);
    let p = random_iri(rng, "p", 5);
    let o = random_object(rng);
    TriplePattern {
        subject: random_slot(rng, s),
        predicate: random_slot(rng, p),
        object: random_slot(rng, o),
    }
}

/// Scan every distinct triple in sorted order and bind by hand.
pub fn brute_force_match(triples: &[Triple], pattern: &TriplePattern) -> Vec<Bindings> {
    let distinct: BTreeSet<&Triple> = triples.iter().collect();
    let mut out = Vec::new();
    'triples: for t in distinct {
        let mut bound: Vec<(String, Term)> = Vec::new();
        for (slot, term) in [
            (&pattern.subject, t.subject()),
            (&pattern.predicate, t.predicate()),
            (&pattern.object, t.object()),
        ] {
            match slot {
                PatternTerm::Term(c) => {
                    if c.kind() != term.kind() || c.value() != term.value() {
                        continue 'triples;
                    }
                }
                PatternTerm::Var(v) => match bound.iter().find(|(name, _)| name == v) {
                    Some((_, prev)) if prev != term => continue 'triples,
                    Some(_) => {}
                    None => bound.push((v.clone(), term.clone())),
                },
            }
        }
        out.push(bound.into_iter().collect());
    }
    out
}

// ---------------------------------------------------------------- catalogs

pub const DOMAINS: [&str; 5] = ["travel", "finance", "health", "retail", "education"];

/// A random valid catalog of up to `max_agents` agents, some serving two
/// domains.
pub fn random_catalog(rng: &mut StdRng, max_agents: usize) -> TripleStore {
    let mut store = TripleStore::new();
    let n = rng.gen_range(0..=max_agents);
    for i in 0..n {
        let agent = format!("urn:soas:agent:g{i:03}");
        let served = rng.gen_range(1..=2);
        for _ in 0..served {
            let d = DOMAINS[rng.gen_range(0..DOMAINS.len())];
            store.insert(Triple::from_iris(&agent, vocab::SERVES_DOMAIN, Term::literal(d)));
        }
        let endpoint = if rng.gen_bool(0.5) {
            format!("tcp://127.0.0.1:{}", rng.gen_range(1024..65535))
        } else {
            format!("inproc://g{i}")
        };
        store.insert(Triple::from_iris(&agent, vocab::ENDPOINT, Term::literal(endpoint)));
    }
    store
}

/// (agent IRI, endpoint) for every agent serving `domain` with an endpoint,
/// sorted by agent IRI.
pub fn brute_force_locate(catalog: &TripleStore, domain: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for t in catalog.iter() {
        if t.predicate().value() != vocab::SERVES_DOMAIN || t.object().value() != domain {
            continue;
        }
        for e in catalog.iter() {
            if e.subject() == t.subject() && e.predicate().value() == vocab::ENDPOINT {
                out.push((t.subject().value().to_string(), e.object().value().to_string()));
            }
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------- ranking

pub fn random_scored_set(rng: &mut StdRng, max: usize, config: &RankConfig) -> Vec<ScoredResult> {
    let n = rng.gen_range(0..=max);
    let mut arrivals: Vec<u64> = (0..n as u64).collect();
    arrivals.shuffle(rng);
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    arrivals
        .into_iter()
        .map(|arrival_index| {
            // coarse values force ties, fine values exercise float ordering
            let pick = |rng: &mut StdRng| {
                if rng.gen_bool(0.6) {
                    grid[rng.gen_range(0..grid.len())]
                } else {
                    rng.gen_range(0.0..=1.0)
                }
            };
            let match_score = pick(rng);
            let relevance = pick(rng);
            ScoredResult {
                record: ResultRecord {
                    request_iri: "urn:soas:request:00000000000000aa".into(),
                    agent_iri: format!("urn:soas:agent:r{}", rng.gen_range(0..4)),
                    title: format!("Item {}", rng.gen_range(0..6)),
                    triples: TripleStore::new(),
                    relevance,
                    arrival_index,
                },
                match_score,
                weight: config.weight(match_score, relevance),
            }
        })
        .collect()
}

fn precedes(a: &ScoredResult, b: &ScoredResult) -> bool {
    if a.weight != b.weight {
        return a.weight > b.weight;
    }
    (&a.record.agent_iri, &a.record.title, a.record.arrival_index)
        < (&b.record.agent_iri, &b.record.title, b.record.arrival_index)
}

/// Position of each element = number of elements that must come before it.
pub fn brute_force_rank(items: &[ScoredResult]) -> Vec<u64> {
    let mut slots: Vec<Option<u64>> = vec![None; items.len()];
    for x in items {
        let pos = items.iter().filter(|y| precedes(y, x)).count();
        assert!(slots[pos].is_none(), "oracle order is not strict");
        slots[pos] = Some(x.record.arrival_index);
    }
    slots.into_iter().map(Option::unwrap).collect()
}

// ---------------------------------------------------------------- parser

/// Fixture requests that parse cleanly.
pub const TEMPLATES: [&str; 20] = [
    "find cheap hotels in vienna",
    "find hotels",
    "hotels in vienna",
    "find cheap flights",
    "find flights near vienna",
    "find hotels with pool",
    "find cheap hotels with pool in vienna",
    "find a hotel in vienna",
    "find the cheap hotel near vienna",
    "find loan",
    "find cheap loan",
    "find a loan in vienna",
    "cheap hotels",
    "find flights at vienna",
    "find hotels with pool near vienna",
    "find an hotel with a pool",
    "find hotels near \"stephansplatz\"",
    "find flights for \"business\"",
    "find loan for vienna",
    "find cheap flight by vienna",
];

/// A lowercase word absent from the fixture lexicon.
pub fn garbage_word(rng: &mut StdRng) -> String {
    let lexicon = fixtures::lexicon();
    loop {
        let len = rng.gen_range(3..=8);
        let w: String = (0..len).map(|_| rng.gen_range(b'a'..=b'z') as char).collect();
        if !lexicon.contains(&w) {
            return w;
        }
    }
}

/// Insert `garbage` at random word boundaries of `template`.
pub fn inject(rng: &mut StdRng, template: &str, garbage: &[String]) -> String {
    let mut words: Vec<String> = template.split(' ').map(str::to_string).collect();
    for g in garbage {
        let at = rng.gen_range(0..=words.len());
        words.insert(at, g.clone());
    }
    words.join(" ")
}

/// (predicate, object) pairs: a model's triples without the request subject.
pub fn shape(triples: &TripleStore) -> BTreeSet<(Term, Term)> {
    triples
        .iter()
        .map(|t| (t.predicate().clone(), t.object().clone()))
        .collect()
}

// ---------------------------------------------------------------- agents

pub fn fixture_kb(agent_iri: &str) -> KnowledgeBase {
    let (_, domain, text) = fixtures::FIXTURE_AGENTS
        .iter()
        .find(|(a, _, _)| *a == agent_iri)
        .expect("fixture agent");
    KnowledgeBase::parse(text, *domain).unwrap()
}

/// Default-config pipeline with the fixture agents running in-process.
pub async fn inproc_pipeline() -> (Pipeline, Vec<AgentHandle>) {
    let network = Network::new();
    let mut p = Pipeline::from_config(&PipelineConfig::default(), network.clone()).unwrap();
    let (catalog, handles) = fixtures::spawn_fixture_agents(&network, p.catalog()).await.unwrap();
    p.set_catalog(catalog).unwrap();
    (p, handles)
}

/// Serve every fixture agent on a tcp loopback port and point the catalog at them.
pub async fn tcp_fixture_catalog(network: &Network) -> (TripleStore, Vec<AgentHandle>) {
    let mut catalog = TripleStore::new();
    let mut handles = Vec::new();
    for t in fixtures::catalog().iter() {
        if t.predicate().value() != vocab::ENDPOINT {
            catalog.insert(t.clone());
        }
    }
    for (agent, _, _) in fixtures::FIXTURE_AGENTS {
        let any_port = Endpoint::Tcp {
            host: "127.0.0.1".into(),
            port: 0,
        };
        let h = serve_agent(Arc::new(fixture_kb(agent)), &any_port, network)
            .await
            .unwrap();
        catalog.insert(Triple::from_iris(
            agent,
            vocab::ENDPOINT,
            Term::literal(h.endpoint().to_string()),
        ));
        handles.push(h);
    }
    (catalog, handles)
}

pub async fn tcp_pipeline() -> (Pipeline, Vec<AgentHandle>) {
    let network = Network::new();
    let mut p = Pipeline::from_config(&PipelineConfig::default(), network.clone()).unwrap();
    let (catalog, handles) = tcp_fixture_catalog(&network).await;
    p.set_catalog(catalog).unwrap();
    (p, handles)
}

/// An inproc agent that answers every request with `reply(request_id)`.
pub fn scripted_agent(network: &Network, name: &str, reply: impl Fn(&str) -> Vec<u8> + Send + Sync + 'static) {
    let mut rx = network.bind_inproc(name).unwrap();
    let reply = Arc::new(reply);
    tokio::spawn(async move {
        while let Some(conn) = rx.recv().await {
            let reply = reply.clone();
            tokio::spawn(async move {
                let mut conn = BufReader::new(conn);
                let Ok(line) = read_line(&mut conn).await else { return };
                let bytes = reply(&peek_id(&line));
                let conn = conn.get_mut();
                let _ = conn.write_all(&bytes).await;
                let _ = conn.shutdown().await;
            });
        }
    });
}

/// An inproc agent that accepts connections and never answers.
pub fn hung_agent(network: &Network, name: &str) {
    let mut rx = network.bind_inproc(name).unwrap();
    tokio::spawn(async move {
        let mut held = Vec::new();
        while let Some(conn) = rx.recv().await {
            held.push(conn);
        }
    });
}

/// Malformed replies with their expected classification.
pub fn malformed_replies() -> Vec<(&'static str, Box<dyn Fn(&str) -> Vec<u8> + Send + Sync>)> {
    vec![
        (
            "version",
            Box::new(|id: &str| format!("{{\"v\":2,\"type\":\"results\",\"id\":\"{id}\",\"items\":[]}}\n").into_bytes()),
        ),
        (
            "unknown-type",
            Box::new(|id: &str| format!("{{\"v\":1,\"type\":\"bogus\",\"id\":\"{id}\",\"items\":[]}}\n").into_bytes()),
        ),
        (
            "relevance-out-of-range",
            Box::new(|id: &str| {
                format!(
                    "{{\"v\":1,\"type\":\"results\",\"id\":\"{id}\",\"items\":[\
                     {{\"title\":\"ok\",\"triples\":[],\"relevance\":0.5}},\
                     {{\"title\":\"bad\",\"triples\":[],\"relevance\":1.5}}]}}\n"
                )
                .into_bytes()
            }),
        ),
        (
            "oversize",
            Box::new(|id: &str| {
                let pad = "x".repeat(soas::comm::MAX_LINE);
                format!("{{\"v\":1,\"type\":\"results\",\"id\":\"{id}\",\"items\":[],\"pad\":\"{pad}\"}}\n").into_bytes()
            }),
        ),
    ]
}

pub fn agent_record(agent: &str, endpoint: &str) -> soas::locator::AgentRecord {
    soas::locator::AgentRecord {
        agent_iri: iri(agent),
        domain: "travel".into(),
        endpoint: endpoint.parse().unwrap(),
    }
}

pub fn titles(records: &[ResultRecord]) -> Vec<&str> {
    records.iter().map(|r| r.title.as_str()).collect()
}
