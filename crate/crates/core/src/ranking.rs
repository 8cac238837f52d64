//! Result classification and prioritized list generation.
//!
//! Each stored record gets a weight that blends how well its triples match
//! the query constraints with the relevance its agent reported:
//!
//! ```text
//! weight = match_coeff * match_score + relevance_coeff * relevance
//! ```
//!
//! The list is then totally ordered by weight (descending), agent IRI,
//! title and arrival index.

use std::cmp::Ordering;

use serde::Deserialize;
use thiserror::Error;

use crate::comm::ResultRecord;
use crate::rpu::QueryModel;

pub const DEFAULT_MATCH_COEFF: f64 = 0.7;
pub const DEFAULT_RELEVANCE_COEFF: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RankConfig {
    pub match_coeff: f64,
    pub relevance_coeff: f64,
}

impl Default for RankConfig {
    fn default() -> Self {
        Self {
            match_coeff: DEFAULT_MATCH_COEFF,
            relevance_coeff: DEFAULT_RELEVANCE_COEFF,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RankError {
    #[error("rank coefficients must lie in [0, 1] and sum to 1.0 (got {0} + {1})")]
    InvalidCoefficients(f64, f64),
    #[error("results belong to different requests ({0} and {1})")]
    MixedRequests(String, String),
}

impl RankConfig {
    pub fn validate(&self) -> Result<(), RankError> {
        let unit = 0.0..=1.0;
        if unit.contains(&self.match_coeff)
            && unit.contains(&self.relevance_coeff)
            && (self.match_coeff + self.relevance_coeff - 1.0).abs() <= 1e-9
        {
            Ok(())
        } else {
            Err(RankError::InvalidCoefficients(self.match_coeff, self.relevance_coeff))
        }
    }

    pub fn weight(&self, match_score: f64, relevance: f64) -> f64 {
        self.match_coeff * match_score + self.relevance_coeff * relevance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredResult {
    pub record: ResultRecord,
    pub match_score: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankedList {
    /// `None` only for an empty list.
    pub request_iri: Option<String>,
    pub results: Vec<ScoredResult>,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }
}

/// Fraction of the query's constraints present in the record's triples
/// (1.0 when the query has none).
pub fn match_score(model: &QueryModel, record: &ResultRecord) -> f64 {
    let constraints = model.constraints();
    if constraints.is_empty() {
        return 1.0;
    }
    let satisfied = constraints
        .iter()
        .filter(|(p, o)| {
            record
                .triples
                .iter()
                .any(|t| t.predicate() == p && t.object() == o)
        })
        .count();
    satisfied as f64 / constraints.len() as f64
}

pub fn score_item(model: &QueryModel, record: &ResultRecord, config: &RankConfig) -> ScoredResult {
    let match_score = match_score(model, record);
    ScoredResult {
        weight: config.weight(match_score, record.relevance),
        match_score,
        record: record.clone(),
    }
}

/// The documented total order.
pub fn rank_order(a: &ScoredResult, b: &ScoredResult) -> Ordering {
    b.weight
        .total_cmp(&a.weight)
        .then_with(|| a.record.agent_iri.cmp(&b.record.agent_iri))
        .then_with(|| a.record.title.cmp(&b.record.title))
        .then_with(|| a.record.arrival_index.cmp(&b.record.arrival_index))
}

pub fn rank(mut scored: Vec<ScoredResult>) -> Result<RankedList, RankError> {
    let request_iri = scored.first().map(|s| s.record.request_iri.clone());
    if let Some(first) = &request_iri {
        if let Some(other) = scored.iter().find(|s| &s.record.request_iri != first) {
            return Err(RankError::MixedRequests(
                first.clone(),
                other.record.request_iri.clone(),
            ));
        }
    }
    scored.sort_by(rank_order);
    Ok(RankedList {
        request_iri,
        results: scored,
    })
}
