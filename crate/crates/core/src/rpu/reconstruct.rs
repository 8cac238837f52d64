use std::collections::BTreeSet;

use super::grammar::RecognizedContent;
use super::lexicon::Lexicon;
use super::tokenize::{Token, TokenKind};
use super::RpuError;
use crate::model::{serialize_triples, vocab, Term, Triple, TripleStore};

/// Which tokens a query triple was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub triple: Triple,
    pub tokens: Vec<Token>,
}

/// Structured reconstruction of one request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryModel {
    pub request_iri: Term,
    pub triples: TripleStore,
    pub domain: String,
    pub source_text: String,
    pub normalized_text: String,
    pub provenance: Vec<Provenance>,
    pub unrecognized: Vec<Token>,
}

impl QueryModel {
    /// The (predicate, object) pairs an answer should satisfy: every query
    /// triple except the type, action and target triples.
    pub fn constraints(&self) -> BTreeSet<(Term, Term)> {
        constraints_of(self.triples.iter())
    }

    pub fn target(&self) -> &Term {
        self.triples
            .iter()
            .find(|t| t.predicate().value() == vocab::TARGET)
            .map(Triple::object)
            .expect("query model has a target triple")
    }

    /// Canonical triple-file rendering, byte-deterministic.
    pub fn serialize(&self) -> String {
        serialize_triples(&self.triples)
    }
}

pub fn constraints_of<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> BTreeSet<(Term, Term)> {
    triples
        .into_iter()
        .filter(|t| {
            !matches!(
                t.predicate().value(),
                vocab::RDF_TYPE | vocab::ACTION | vocab::TARGET
            )
        })
        .map(|t| (t.predicate().clone(), t.object().clone()))
        .collect()
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

pub fn request_iri(normalized_text: &str) -> Term {
    Term::iri(format!(
        "{}{:016x}",
        vocab::REQUEST_PREFIX,
        fnv1a64(normalized_text.as_bytes())
    ))
    .expect("request IRI is well-formed")
}

pub fn preposition_predicate(preposition: &str) -> Option<&'static str> {
    Some(match preposition {
        "in" | "at" => vocab::LOCATION,
        "near" => vocab::NEAR_LOCATION,
        "with" => vocab::FEATURE,
        "of" | "for" | "by" => vocab::TOPIC,
        _ => return None,
    })
}

fn iri_of(token: &Token, lexicon: &Lexicon) -> Result<Term, RpuError> {
    lexicon
        .get(&token.lexeme)
        .and_then(|e| e.iri.clone())
        .ok_or_else(|| RpuError::MissingIri {
            lexeme: token.lexeme.clone(),
        })
}

/// Build the query model from recognized content.
///
/// `normalized_text` is the output of `read_request` and seeds the request
/// IRI; `source_text` is the raw request kept for reporting.
pub fn reconstruct(
    rc: &RecognizedContent,
    lexicon: &Lexicon,
    source_text: &str,
    normalized_text: &str,
) -> Result<QueryModel, RpuError> {
    let head = rc.head_noun();
    let domain = lexicon
        .get(&head.lexeme)
        .and_then(|e| e.domain.clone())
        .filter(|d| !d.is_empty())
        .ok_or_else(|| RpuError::NoDomain {
            lexeme: head.lexeme.clone(),
        })?;

    let req = request_iri(normalized_text);
    let mut provenance = Vec::new();
    let mut emit = |predicate: &str, object: Term, tokens: Vec<Token>| {
        let triple = Triple::new(
            req.clone(),
            Term::iri(predicate).expect("vocabulary IRI"),
            object,
        )
        .expect("IRI subject and predicate");
        provenance.push(Provenance { triple, tokens });
    };

    emit(
        vocab::RDF_TYPE,
        Term::iri(vocab::REQUEST).expect("vocabulary IRI"),
        Vec::new(),
    );
    if let Some(verb) = &rc.command {
        emit(vocab::ACTION, iri_of(verb, lexicon)?, vec![verb.clone()]);
    }
    emit(vocab::TARGET, iri_of(head, lexicon)?, vec![head.clone()]);
    for modifier in &rc.object_phrase[..rc.object_phrase.len() - 1] {
        emit(vocab::ATTRIBUTE, iri_of(modifier, lexicon)?, vec![modifier.clone()]);
    }
    for q in &rc.qualifiers {
        let predicate = preposition_predicate(&q.preposition.lexeme).ok_or_else(|| {
            RpuError::UnmappedPreposition {
                lexeme: q.preposition.lexeme.clone(),
            }
        })?;
        let head = q.head();
        let object = match head.kind {
            TokenKind::Quoted => Term::literal(head.lexeme.clone()),
            _ => iri_of(head, lexicon)?,
        };
        let mut tokens = vec![q.preposition.clone()];
        tokens.extend(q.value.iter().cloned());
        emit(predicate, object, tokens);
    }

    let triples = provenance.iter().map(|p| p.triple.clone()).collect();
    Ok(QueryModel {
        request_iri: req,
        triples,
        domain,
        source_text: source_text.to_string(),
        normalized_text: normalized_text.to_string(),
        provenance,
        unrecognized: rc.unrecognized.clone(),
    })
}
