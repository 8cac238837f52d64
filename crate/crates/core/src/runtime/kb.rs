use std::path::Path;

use thiserror::Error;

use crate::comm::{AgentError, AgentRequest, AgentResponse, ResponseItem};
use crate::model::{parse_triples, vocab, SyntaxError, Term, TripleStore};
use crate::rpu::constraints_of;

#[derive(Debug, Clone, PartialEq)]
pub struct KbItem {
    pub item_iri: Term,
    pub title: String,
    pub triples: TripleStore,
}

/// An agent's immutable knowledge: one item per subject in the KB file.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeBase {
    pub domain: String,
    pub items: Vec<KbItem>,
}

#[derive(Debug, Error)]
pub enum KbError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("item {item}: {reason}")]
    Invalid { item: String, reason: String },
    #[error("cannot read knowledge base {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl KnowledgeBase {
    /// Group a triple store into items by subject. Each item needs exactly
    /// one `soas:title` literal.
    pub fn from_store(store: &TripleStore, domain: impl Into<String>) -> Result<Self, KbError> {
        let mut items = Vec::new();
        for subject in store.subjects() {
            let triples: TripleStore = store.with_subject(subject).cloned().collect();
            let titles: Vec<_> = triples
                .iter()
                .filter(|t| t.predicate().value() == vocab::TITLE)
                .collect();
            let invalid = |reason: &str| KbError::Invalid {
                item: subject.value().to_string(),
                reason: reason.to_string(),
            };
            let title = match titles.as_slice() {
                [t] if t.object().is_literal() => t.object().value().to_string(),
                [_] => return Err(invalid("title must be a literal")),
                [] => return Err(invalid("missing title")),
                _ => return Err(invalid("more than one title")),
            };
            items.push(KbItem {
                item_iri: subject.clone(),
                title,
                triples,
            });
        }
        Ok(Self {
            domain: domain.into(),
            items,
        })
    }

    pub fn parse(text: &str, domain: impl Into<String>) -> Result<Self, KbError> {
        Self::from_store(&parse_triples(text)?, domain)
    }

    pub fn load(path: impl AsRef<Path>, domain: impl Into<String>) -> Result<Self, KbError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| KbError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, domain)
    }
}

fn bad_request(req: &AgentRequest, message: &str) -> AgentError {
    AgentError {
        request_iri: req.request_iri.clone(),
        code: "bad-request".into(),
        message: message.into(),
    }
}

/// Answer a query by constraint satisfaction.
///
/// Items of the target class qualify. With constraints present, an item's
/// relevance is the fraction of (predicate, object) constraints it has as
/// triples, and items scoring zero are left out. With no constraints every
/// qualifying item scores 1.0. Results are ordered by relevance descending,
/// then item IRI.
pub fn answer_query(kb: &KnowledgeBase, req: &AgentRequest) -> Result<AgentResponse, AgentError> {
    if req.triples.is_empty() {
        return Err(bad_request(req, "empty query"));
    }
    let is_request_type = |t: &&crate::model::Triple| {
        t.subject().value() == req.request_iri
            && t.predicate().value() == vocab::RDF_TYPE
            && t.object().value() == vocab::REQUEST
            && t.object().is_iri()
    };
    if !req.triples.iter().any(|t| is_request_type(&t)) {
        return Err(bad_request(req, "missing request type triple"));
    }
    let targets: Vec<&Term> = req
        .triples
        .iter()
        .filter(|t| t.predicate().value() == vocab::TARGET)
        .map(|t| t.object())
        .collect();
    let target = match targets.as_slice() {
        [t] => *t,
        [] => return Err(bad_request(req, "missing target triple")),
        _ => return Err(bad_request(req, "more than one target triple")),
    };
    let constraints = constraints_of(&req.triples);

    let rdf_type = Term::iri(vocab::RDF_TYPE).expect("vocabulary IRI");
    let mut scored: Vec<(&KbItem, f64)> = Vec::new();
    for item in &kb.items {
        let has = |p: &Term, o: &Term| {
            item.triples
                .iter()
                .any(|t| t.predicate() == p && t.object() == o)
        };
        if !has(&rdf_type, target) {
            continue;
        }
        if constraints.is_empty() {
            scored.push((item, 1.0));
            continue;
        }
        let satisfied = constraints.iter().filter(|(p, o)| has(p, o)).count();
        if satisfied > 0 {
            scored.push((item, satisfied as f64 / constraints.len() as f64));
        }
    }
    scored.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| a.0.item_iri.cmp(&b.0.item_iri))
    });
    Ok(AgentResponse {
        request_iri: req.request_iri.clone(),
        items: scored
            .into_iter()
            .map(|(item, relevance)| ResponseItem {
                title: item.title.clone(),
                triples: item.triples.iter().cloned().collect(),
                relevance,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Triple;
    use crate::rpu::process_request;

    const HOTELS: &str = r#"
<urn:soas:hotel:a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <urn:soas:Hotel> .
<urn:soas:hotel:a> <urn:soas:title> "Hotel Alpha" .
<urn:soas:hotel:a> <urn:soas:attribute> <urn:soas:PriceLow> .
<urn:soas:hotel:a> <urn:soas:location> <urn:soas:place:vienna> .
<urn:soas:hotel:b> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <urn:soas:Hotel> .
<urn:soas:hotel:b> <urn:soas:title> "Hotel Bristol" .
<urn:soas:hotel:b> <urn:soas:location> <urn:soas:place:vienna> .
<urn:soas:hotel:c> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <urn:soas:Hotel> .
<urn:soas:hotel:c> <urn:soas:title> "Hotel Carinthia" .
<urn:soas:hotel:c> <urn:soas:location> <urn:soas:place:graz> .
"#;

    fn request(text: &str) -> AgentRequest {
        AgentRequest::from_model(&process_request(text, &fixtures::lexicon()).unwrap())
    }

    fn titles_and_scores(resp: &AgentResponse) -> Vec<(&str, f64)> {
        resp.items.iter().map(|i| (i.title.as_str(), i.relevance)).collect()
    }

    #[test]
    fn constraint_ratio_over_three_hotels() {
        let kb = KnowledgeBase::parse(HOTELS, "travel").unwrap();
        let resp = answer_query(&kb, &request("find cheap hotels in vienna")).unwrap();
        assert_eq!(
            titles_and_scores(&resp),
            [("Hotel Alpha", 1.0), ("Hotel Bristol", 0.5)]
        );
    }

    #[test]
    fn no_constraints_returns_every_hotel() {
        let kb = KnowledgeBase::parse(HOTELS, "travel").unwrap();
        let resp = answer_query(&kb, &request("find hotels")).unwrap();
        assert_eq!(resp.items.len(), 3);
        assert!(resp.items.iter().all(|i| i.relevance == 1.0));
        let titles: Vec<_> = resp.items.iter().map(|i| i.title.as_str()).collect();
        assert_eq!(titles, ["Hotel Alpha", "Hotel Bristol", "Hotel Carinthia"]);
    }

    #[test]
    fn other_target_class_is_empty() {
        let kb = KnowledgeBase::parse(HOTELS, "travel").unwrap();
        assert!(answer_query(&kb, &request("flights")).unwrap().items.is_empty());
    }

    #[test]
    fn returned_items_carry_their_triples() {
        let kb = KnowledgeBase::parse(HOTELS, "travel").unwrap();
        let resp = answer_query(&kb, &request("find cheap hotels in vienna")).unwrap();
        assert_eq!(resp.items[0].triples.len(), 4);
        assert!(resp.items[0]
            .triples
            .iter()
            .all(|t| t.subject().value() == "urn:soas:hotel:a"));
    }

    #[test]
    fn invalid_requests_are_bad_request() {
        let kb = KnowledgeBase::parse(HOTELS, "travel").unwrap();
        let mut req = request("find hotels");
        req.triples.retain(|t| t.predicate().value() != vocab::TARGET);
        assert_eq!(answer_query(&kb, &req).unwrap_err().code, "bad-request");
        let mut req = request("find hotels");
        req.triples.retain(|t| t.predicate().value() != vocab::RDF_TYPE);
        assert_eq!(answer_query(&kb, &req).unwrap_err().code, "bad-request");
        let empty = AgentRequest {
            request_iri: "urn:x:y".into(),
            triples: vec![],
        };
        assert_eq!(answer_query(&kb, &empty).unwrap_err().code, "bad-request");
    }

    #[test]
    fn fixture_kbs_load() {
        let a1 = KnowledgeBase::parse(fixtures::TRAVEL_A1_KB, "travel").unwrap();
        let a2 = KnowledgeBase::parse(fixtures::TRAVEL_A2_KB, "travel").unwrap();
        let fin = KnowledgeBase::parse(fixtures::FINANCE_KB, "finance").unwrap();
        assert_eq!(a1.items.len() + a2.items.len(), 8);
        assert_eq!(fin.items.len(), 3);
        let req = request("find cheap hotels in vienna");
        assert_eq!(answer_query(&a1, &req).unwrap().items.len(), 3);
        assert_eq!(answer_query(&a2, &req).unwrap().items.len(), 2);
    }

    #[test]
    fn kb_item_needs_title() {
        let text = "<urn:x:1> <urn:soas:location> <urn:soas:place:graz> .";
        assert!(matches!(KnowledgeBase::parse(text, "d"), Err(KbError::Invalid { .. })));
        let dup = Triple::from_iris("urn:x:1", vocab::TITLE, Term::literal("a")).to_line()
            + "\n"
            + &Triple::from_iris("urn:x:1", vocab::TITLE, Term::literal("b")).to_line();
        assert!(KnowledgeBase::parse(&dup, "d").is_err());
    }
}
