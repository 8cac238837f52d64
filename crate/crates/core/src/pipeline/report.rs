use std::fmt::Write as _;

use serde_json::{json, Value};

use super::config::OutputFormat;
use super::PipelineError;
use crate::comm::wire::triples_to_json;
use crate::comm::AgentOutcome;
use crate::model::Triple;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// 1-based, contiguous.
    pub rank: usize,
    pub title: String,
    pub agent_iri: String,
    pub weight: f64,
    pub match_score: f64,
    pub relevance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactedAgent {
    pub agent_iri: String,
    pub outcome: AgentOutcome,
}

/// The user-facing result of one request.
#[derive(Debug, Clone, PartialEq)]
pub struct FinalReport {
    pub source_text: String,
    pub request_iri: String,
    pub domain: String,
    pub query_triples: Vec<Triple>,
    pub agents_contacted: Vec<ContactedAgent>,
    pub results: Vec<ReportRow>,
    pub warnings: Vec<String>,
}

impl FinalReport {
    pub fn to_json_value(&self) -> Value {
        json!({
            "source_text": self.source_text,
            "request_iri": self.request_iri,
            "domain": self.domain,
            "query_triples": triples_to_json(&self.query_triples),
            "agents_contacted": self.agents_contacted.iter().map(|a| json!({
                "agent_iri": a.agent_iri,
                "outcome": a.outcome.label(),
                "items": match a.outcome { AgentOutcome::Ok(n) => n, _ => 0 },
            })).collect::<Vec<_>>(),
            "results": self.results.iter().map(|r| json!({
                "rank": r.rank,
                "title": r.title,
                "agent_iri": r.agent_iri,
                "weight": r.weight,
                "match_score": r.match_score,
                "relevance": r.relevance,
            })).collect::<Vec<_>>(),
            "warnings": self.warnings,
        })
    }
}

/// Canonical JSON: object keys sorted, no insignificant whitespace, one
/// trailing newline.
pub fn canonical_json(value: &Value) -> String {
    // serde_json's default map is a BTreeMap, so keys serialize sorted
    let mut out = value.to_string();
    out.push('\n');
    out
}

pub fn format_report(report: &FinalReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => canonical_json(&report.to_json_value()),
        OutputFormat::Text => format_text(report),
    }
}

fn format_text(report: &FinalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "query: {:?}  domain: {}",
        report.source_text, report.domain
    );
    let agents: Vec<String> = report
        .agents_contacted
        .iter()
        .map(|a| format!("{}={}", a.agent_iri, a.outcome.label()))
        .collect();
    let _ = writeln!(out, "agents: {}", agents.join(" "));
    if report.results.is_empty() {
        out.push_str("no results\n");
    }
    for row in &report.results {
        let _ = writeln!(
            out,
            "#{}  {:.4}  {}  ({})",
            row.rank, row.weight, row.title, row.agent_iri
        );
    }
    if report.warnings.is_empty() {
        out.push_str("warnings: none\n");
    } else {
        out.push_str("warnings:\n");
        for w in &report.warnings {
            let _ = writeln!(out, "  - {w}");
        }
    }
    out
}

pub fn format_error(err: &PipelineError, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => canonical_json(&json!({
            "error": {
                "stage": err.stage.as_str(),
                "code": err.code(),
                "message": err.to_string(),
            }
        })),
        OutputFormat::Text => format!("error at stage {}: {} ({})\n", err.stage.as_str(), err, err.code()),
    }
}
