//! The user-facing orchestrator: runs one request through every stage and
//! turns the outcome into a [`FinalReport`].

mod config;
mod report;

use std::time::Duration;

use thiserror::Error;
use tokio::sync::Mutex;

pub use config::{ConfigError, OutputFormat, PipelineConfig, DEFAULT_TIMEOUT_MS, TIMEOUT_ENV};
pub use report::{canonical_json, format_error, format_report, ContactedAgent, FinalReport, ReportRow};

use crate::comm::{fetch_results, query_agents, AgentReport, CommError, Network, ResultStore};
use crate::fixtures;
use crate::locator::{build_agent_query, load_catalog, locate_agents, validate_catalog, LocateError};
use crate::model::TripleStore;
use crate::ranking::{rank, score_item, RankConfig, RankError};
use crate::rpu::{process_request, Lexicon, RpuError, RpuStage};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Read,
    Tokenize,
    Parse,
    Reconstruct,
    Locate,
    Query,
    Rank,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Read => "read",
            Self::Tokenize => "tokenize",
            Self::Parse => "parse",
            Self::Reconstruct => "reconstruct",
            Self::Locate => "locate",
            Self::Query => "query",
            Self::Rank => "rank",
        }
    }
}

impl From<RpuStage> for Stage {
    fn from(s: RpuStage) -> Self {
        match s {
            RpuStage::Read => Self::Read,
            RpuStage::Tokenize => Self::Tokenize,
            RpuStage::Parse => Self::Parse,
            RpuStage::Reconstruct => Self::Reconstruct,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineErrorKind {
    #[error(transparent)]
    Rpu(RpuError),
    #[error(transparent)]
    Locate(LocateError),
    #[error("all {} agents failed", .0.len())]
    AllAgentsFailed(Vec<AgentReport>),
    #[error(transparent)]
    Comm(CommError),
    #[error(transparent)]
    Rank(RankError),
}

/// A report-level failure, attributed to the stage that raised it.
#[derive(Debug, Error)]
#[error("{kind}")]
pub struct PipelineError {
    pub stage: Stage,
    pub kind: PipelineErrorKind,
}

impl PipelineError {
    /// Stable error name, e.g. `NoObjectPhrase` or `AllAgentsFailed`.
    pub fn code(&self) -> &'static str {
        match &self.kind {
            PipelineErrorKind::Rpu(e) => match e {
                RpuError::EmptyRequest => "EmptyRequest",
                RpuError::UnterminatedQuote { .. } => "UnterminatedQuote",
                RpuError::NoObjectPhrase => "NoObjectPhrase",
                RpuError::DanglingPreposition { .. } => "DanglingPreposition",
                RpuError::UnexpectedToken { .. } => "UnexpectedToken",
                RpuError::NoDomain { .. } => "NoDomain",
                RpuError::MissingIri { .. } => "MissingIri",
                RpuError::UnmappedPreposition { .. } => "UnmappedPreposition",
            },
            PipelineErrorKind::Locate(LocateError::NoAgentsFound { .. }) => "NoAgentsFound",
            PipelineErrorKind::AllAgentsFailed(_) => "AllAgentsFailed",
            PipelineErrorKind::Comm(e) => match e {
                CommError::NoAgents => "NoAgents",
                CommError::InvalidTimeout => "InvalidTimeout",
                CommError::Encode(_) => "MessageTooLarge",
                CommError::AllAgentsFailed(_) => "AllAgentsFailed",
                CommError::Store(_) => "StoreFailed",
            },
            PipelineErrorKind::Rank(RankError::InvalidCoefficients(..)) => "InvalidCoefficients",
            PipelineErrorKind::Rank(RankError::MixedRequests(..)) => "MixedRequests",
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

fn fail(stage: Stage, kind: PipelineErrorKind) -> PipelineError {
    PipelineError { stage, kind }
}

/// A configured pipeline. Requests are handled strictly one at a time.
pub struct Pipeline {
    lexicon: Lexicon,
    catalog: TripleStore,
    network: Network,
    timeout: Duration,
    rank: RankConfig,
    store: ResultStore,
    gate: Mutex<()>,
}

impl Pipeline {
    pub fn new(
        lexicon: Lexicon,
        catalog: TripleStore,
        network: Network,
        timeout: Duration,
        rank: RankConfig,
        store: ResultStore,
    ) -> Self {
        Self {
            lexicon,
            catalog,
            network,
            timeout,
            rank,
            store,
            gate: Mutex::new(()),
        }
    }

    /// Validate `cfg` and load everything it names. Missing lexicon or
    /// catalog paths mean the shipped fixtures.
    pub fn from_config(cfg: &PipelineConfig, network: Network) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let lexicon = match &cfg.lexicon_path {
            Some(p) => Lexicon::load(p)?,
            None => fixtures::lexicon(),
        };
        let catalog = match &cfg.catalog_path {
            Some(p) => load_catalog(p)?,
            None => fixtures::catalog(),
        };
        let store = match &cfg.journal_path {
            Some(p) => ResultStore::open_journal(p)?,
            None => ResultStore::in_memory(),
        };
        Ok(Self::new(lexicon, catalog, network, cfg.timeout(), cfg.rank, store))
    }

    pub fn catalog(&self) -> &TripleStore {
        &self.catalog
    }

    /// Swap the catalog, e.g. for one with rewritten endpoints.
    pub fn set_catalog(&mut self, catalog: TripleStore) -> Result<(), ConfigError> {
        validate_catalog(&catalog)?;
        self.catalog = catalog;
        Ok(())
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn store(&self) -> &ResultStore {
        &self.store
    }

    pub async fn handle_request(&self, raw: &str) -> Result<FinalReport, PipelineError> {
        let _turn = self.gate.lock().await;

        let model = process_request(raw, &self.lexicon)
            .map_err(|(stage, e)| fail(stage.into(), PipelineErrorKind::Rpu(e)))?;
        let mut warnings: Vec<String> = model
            .unrecognized
            .iter()
            .map(|t| format!("unrecognized: {}", t.lexeme))
            .collect();

        let query = build_agent_query(&model);
        let agents = locate_agents(&self.catalog, &query)
            .map_err(|e| fail(Stage::Locate, PipelineErrorKind::Locate(e)))?;

        let request_iri = model.request_iri.value().to_string();
        // earlier runs of the same text (e.g. a replayed journal) stay out of this report
        let first_index = self.store.count_for(&request_iri);
        let reports = query_agents(&self.network, &agents, &model, self.timeout, &self.store)
            .await
            .map_err(|e| match e {
                CommError::AllAgentsFailed(r) => fail(Stage::Query, PipelineErrorKind::AllAgentsFailed(r)),
                other => fail(Stage::Query, PipelineErrorKind::Comm(other)),
            })?;
        for r in &reports {
            if r.outcome.is_failure() {
                warnings.push(format!(
                    "agent {} failed: {}",
                    r.agent.agent_iri.value(),
                    r.outcome.label()
                ));
            }
        }

        let records = fetch_results(&self.store, &request_iri);
        let scored = records
            .iter()
            .filter(|r| r.arrival_index >= first_index)
            .map(|r| score_item(&model, r, &self.rank))
            .collect();
        let ranked = rank(scored).map_err(|e| fail(Stage::Rank, PipelineErrorKind::Rank(e)))?;

        Ok(FinalReport {
            source_text: model.source_text.clone(),
            request_iri,
            domain: model.domain.clone(),
            query_triples: model.triples.iter().cloned().collect(),
            agents_contacted: reports
                .into_iter()
                .map(|r| ContactedAgent {
                    agent_iri: r.agent.agent_iri.value().to_string(),
                    outcome: r.outcome,
                })
                .collect(),
            results: ranked
                .results
                .into_iter()
                .enumerate()
                .map(|(i, s)| ReportRow {
                    rank: i + 1,
                    title: s.record.title,
                    agent_iri: s.record.agent_iri,
                    weight: s.weight,
                    match_score: s.match_score,
                    relevance: s.record.relevance,
                })
                .collect(),
            warnings,
        })
    }
}
