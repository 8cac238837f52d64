//! Append-only result store, optionally backed by a JSON-lines journal.
//!
//! Journal records use the wire item encoding plus the request id, the
//! agent IRI and the arrival index:
//!
//! ```text
//! {"agent_iri":..,"arrival_index":0,"id":..,"relevance":0.5,"title":..,"triples":[..]}
//! ```

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde_json::{json, Value};
use thiserror::Error;

use super::wire::{triples_from_json, triples_to_json, ResponseItem};
use crate::model::TripleStore;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub request_iri: String,
    pub agent_iri: String,
    pub title: String,
    pub triples: TripleStore,
    pub relevance: f64,
    pub arrival_index: u64,
}

impl ResultRecord {
    fn to_journal_line(&self) -> String {
        let value = json!({
            "id": self.request_iri,
            "agent_iri": self.agent_iri,
            "arrival_index": self.arrival_index,
            "title": self.title,
            "triples": triples_to_json(&self.triples),
            "relevance": self.relevance,
        });
        let mut line = value.to_string();
        line.push('\n');
        line
    }

    fn from_journal_line(line: &str) -> Result<Self, String> {
        let v: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let s = |key: &str| {
            v.get(key)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| format!("missing {key}"))
        };
        let relevance = v
            .get("relevance")
            .and_then(Value::as_f64)
            .filter(|r| (0.0..=1.0).contains(r))
            .ok_or("missing or out-of-range relevance")?;
        Ok(Self {
            request_iri: s("id")?,
            agent_iri: s("agent_iri")?,
            title: s("title")?,
            triples: triples_from_json(v.get("triples"))
                .map_err(|e| e.to_string())?
                .into_iter()
                .collect(),
            relevance,
            arrival_index: v
                .get("arrival_index")
                .and_then(Value::as_u64)
                .ok_or("missing arrival_index")?,
        })
    }
}

/// Store mutation log entry. Appends are the only mutation there is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StoreOp {
    Append {
        request_iri: String,
        arrival_index: u64,
    },
}

#[derive(Debug, Error)]
pub enum JournalError {
    #[error("journal {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("journal {path}, line {line}: {message}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

#[derive(Default)]
struct Inner {
    records: Vec<ResultRecord>,
    by_request: HashMap<String, Vec<usize>>,
    journal: Option<(PathBuf, BufWriter<File>)>,
    ops: Vec<StoreOp>,
}

impl Inner {
    fn next_index(&self, request_iri: &str) -> u64 {
        self.by_request.get(request_iri).map_or(0, |v| v.len() as u64)
    }

    fn push(&mut self, record: ResultRecord) {
        self.by_request
            .entry(record.request_iri.clone())
            .or_default()
            .push(self.records.len());
        self.records.push(record);
    }
}

/// Thread-safe append-only collection of result records keyed by request.
/// Arrival indices are contiguous per request and assigned under the lock.
#[derive(Default)]
pub struct ResultStore {
    inner: Mutex<Inner>,
}

impl std::fmt::Debug for ResultStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResultStore").field("len", &self.len()).finish()
    }
}

impl ResultStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Open (or create) a journal-backed store, replaying existing records.
    pub fn open_journal(path: impl AsRef<Path>) -> Result<Self, JournalError> {
        let path = path.as_ref().to_path_buf();
        let io_err = |source| JournalError::Io {
            path: path.clone(),
            source,
        };
        let mut inner = Inner::default();
        if path.exists() {
            let reader = BufReader::new(File::open(&path).map_err(io_err)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line.map_err(io_err)?;
                if line.trim().is_empty() {
                    continue;
                }
                let corrupt = |message: String| JournalError::Corrupt {
                    path: path.clone(),
                    line: idx + 1,
                    message,
                };
                let record = ResultRecord::from_journal_line(&line).map_err(corrupt)?;
                let expected = inner.next_index(&record.request_iri);
                if record.arrival_index != expected {
                    return Err(corrupt(format!(
                        "arrival_index {} out of sequence, expected {expected}",
                        record.arrival_index
                    )));
                }
                inner.push(record);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err)?;
        inner.journal = Some((path, BufWriter::new(file)));
        Ok(Self {
            inner: Mutex::new(inner),
        })
    }

    /// Append one agent's batch atomically; returns the assigned indices.
    pub fn append_batch(
        &self,
        request_iri: &str,
        agent_iri: &str,
        items: Vec<ResponseItem>,
    ) -> io::Result<std::ops::Range<u64>> {
        let mut inner = self.inner.lock().expect("store lock");
        let start = inner.next_index(request_iri);
        let records: Vec<ResultRecord> = items
            .into_iter()
            .enumerate()
            .map(|(i, item)| ResultRecord {
                request_iri: request_iri.to_string(),
                agent_iri: agent_iri.to_string(),
                title: item.title,
                triples: item.triples.into_iter().collect(),
                relevance: item.relevance,
                arrival_index: start + i as u64,
            })
            .collect();
        if let Some((_, journal)) = inner.journal.as_mut() {
            for r in &records {
                journal.write_all(r.to_journal_line().as_bytes())?;
            }
            journal.flush()?;
        }
        let end = start + records.len() as u64;
        for r in records {
            inner.ops.push(StoreOp::Append {
                request_iri: r.request_iri.clone(),
                arrival_index: r.arrival_index,
            });
            inner.push(r);
        }
        Ok(start..end)
    }

    /// Records for one request in arrival order.
    pub fn fetch_results(&self, request_iri: &str) -> Vec<ResultRecord> {
        let inner = self.inner.lock().expect("store lock");
        inner
            .by_request
            .get(request_iri)
            .map(|idx| idx.iter().map(|&i| inner.records[i].clone()).collect())
            .unwrap_or_default()
    }

    pub fn count_for(&self, request_iri: &str) -> u64 {
        self.inner.lock().expect("store lock").next_index(request_iri)
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("store lock").records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Mutations performed by this process (replayed records excluded).
    pub fn operations(&self) -> Vec<StoreOp> {
        self.inner.lock().expect("store lock").ops.clone()
    }

    pub fn journal_path(&self) -> Option<PathBuf> {
        self.inner
            .lock()
            .expect("store lock")
            .journal
            .as_ref()
            .map(|(p, _)| p.clone())
    }
}

/// Free-function form of [`ResultStore::fetch_results`].
pub fn fetch_results(store: &ResultStore, request_iri: &str) -> Vec<ResultRecord> {
    store.fetch_results(request_iri)
}
