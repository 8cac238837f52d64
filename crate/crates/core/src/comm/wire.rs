//! NDJSON wire protocol between the communicator and domain agents.
//!
//! ```text
//! request  {"v":1,"type":"query","id":<string>,"triples":[[["iri",s],["iri",p],["iri"|"lit",o]],...]}
//! response {"v":1,"type":"results","id":<string>,"items":[{"title":<string>,"triples":[...],"relevance":<number>}]}
//! error    {"v":1,"type":"error","id":<string>,"code":<string>,"message":<string>}
//! ```
//!
//! Every message is one UTF-8 line of at most [`MAX_LINE`] bytes including
//! the terminating `\n`.

use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;
use tokio::io::{AsyncBufRead, AsyncBufReadExt, AsyncReadExt};

use crate::model::{Term, Triple, TripleStore};
use crate::rpu::QueryModel;

pub const PROTOCOL_VERSION: u64 = 1;
pub const MAX_LINE: usize = 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("message exceeds {MAX_LINE} bytes")]
    Oversize,
    #[error("malformed message: {0}")]
    Malformed(String),
    #[error("unsupported protocol version {0}")]
    Version(String),
    #[error("unknown message type {0:?}")]
    UnknownType(String),
    #[error("relevance {0} outside [0, 1]")]
    RelevanceOutOfRange(String),
    #[error("response id {found:?} does not match request {expected:?}")]
    IdMismatch { expected: String, found: String },
}

impl ProtocolError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Oversize => "oversize",
            Self::Malformed(_) => "malformed",
            Self::Version(_) => "version",
            Self::UnknownType(_) => "unknown-type",
            Self::RelevanceOutOfRange(_) => "relevance-out-of-range",
            Self::IdMismatch { .. } => "id-mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("encoded message is {0} bytes, limit is {MAX_LINE}")]
pub struct MessageTooLarge(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct AgentRequest {
    pub request_iri: String,
    pub triples: Vec<Triple>,
}

impl AgentRequest {
    pub fn from_model(model: &QueryModel) -> Self {
        Self {
            request_iri: model.request_iri.value().to_string(),
            triples: model.triples.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseItem {
    pub title: String,
    pub triples: Vec<Triple>,
    pub relevance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentResponse {
    pub request_iri: String,
    pub items: Vec<ResponseItem>,
}

/// An agent-reported failure (`"type":"error"`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("agent error {code}: {message}")]
pub struct AgentError {
    pub request_iri: String,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResponseError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    AgentFailed(#[from] AgentError),
}

type WireTerm<'a> = (&'a str, &'a str);
type WireTriple<'a> = [WireTerm<'a>; 3];

fn wire_term(t: &Term) -> WireTerm<'_> {
    (if t.is_iri() { "iri" } else { "lit" }, t.value())
}

fn wire_triple(t: &Triple) -> WireTriple<'_> {
    [wire_term(t.subject()), wire_term(t.predicate()), wire_term(t.object())]
}

fn sorted_wire_triples(triples: &[Triple]) -> Vec<WireTriple<'_>> {
    let mut sorted: Vec<&Triple> = triples.iter().collect();
    sorted.sort();
    sorted.into_iter().map(wire_triple).collect()
}

/// JSON array form of a triple list, as used in messages and the journal.
pub fn triples_to_json<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> Value {
    Value::Array(
        triples
            .into_iter()
            .map(|t| serde_json::to_value(wire_triple(t)).expect("strings serialize"))
            .collect(),
    )
}

#[derive(Serialize)]
struct QueryMessage<'a> {
    v: u64,
    #[serde(rename = "type")]
    kind: &'static str,
    id: &'a str,
    triples: Vec<WireTriple<'a>>,
}

#[derive(Serialize)]
struct WireItem<'a> {
    title: &'a str,
    triples: Vec<WireTriple<'a>>,
    relevance: f64,
}

#[derive(Serialize)]
struct ResultsMessage<'a> {
    v: u64,
    #[serde(rename = "type")]
    kind: &'static str,
    id: &'a str,
    items: Vec<WireItem<'a>>,
}

#[derive(Serialize)]
struct ErrorMessage<'a> {
    v: u64,
    #[serde(rename = "type")]
    kind: &'static str,
    id: &'a str,
    code: &'a str,
    message: &'a str,
}

fn finish_line(value: &impl Serialize) -> Result<Vec<u8>, MessageTooLarge> {
    let mut bytes = serde_json::to_vec(value).expect("message serializes");
    bytes.push(b'\n');
    if bytes.len() > MAX_LINE {
        return Err(MessageTooLarge(bytes.len()));
    }
    Ok(bytes)
}

pub fn encode_request(model: &QueryModel) -> Result<Vec<u8>, MessageTooLarge> {
    encode_agent_request(&AgentRequest::from_model(model))
}

pub fn encode_agent_request(req: &AgentRequest) -> Result<Vec<u8>, MessageTooLarge> {
    finish_line(&QueryMessage {
        v: PROTOCOL_VERSION,
        kind: "query",
        id: &req.request_iri,
        triples: sorted_wire_triples(&req.triples),
    })
}

/// Items keep their order; each item's triples are sorted.
pub fn encode_response(resp: &AgentResponse) -> Result<Vec<u8>, MessageTooLarge> {
    finish_line(&ResultsMessage {
        v: PROTOCOL_VERSION,
        kind: "results",
        id: &resp.request_iri,
        items: resp
            .items
            .iter()
            .map(|i| WireItem {
                title: &i.title,
                triples: sorted_wire_triples(&i.triples),
                relevance: i.relevance,
            })
            .collect(),
    })
}

pub fn encode_error(err: &AgentError) -> Vec<u8> {
    let encode = |message: &str| {
        finish_line(&ErrorMessage {
            v: PROTOCOL_VERSION,
            kind: "error",
            id: &err.request_iri,
            code: &err.code,
            message,
        })
    };
    encode(&err.message).unwrap_or_else(|_| encode("message too large").expect("short error fits"))
}

fn malformed(msg: impl Into<String>) -> ProtocolError {
    ProtocolError::Malformed(msg.into())
}

/// Parse a line into its envelope object after checking size, UTF-8, JSON
/// and version.
fn envelope(line: &[u8]) -> Result<Map<String, Value>, ProtocolError> {
    if line.len() > MAX_LINE {
        return Err(ProtocolError::Oversize);
    }
    let text = std::str::from_utf8(line).map_err(|_| malformed("not UTF-8"))?;
    let text = text.strip_suffix('\n').unwrap_or(text);
    if text.contains('\n') {
        return Err(malformed("embedded newline"));
    }
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let Value::Object(obj) = value else {
        return Err(malformed("message is not an object"));
    };
    match obj.get("v") {
        Some(Value::Number(n)) if n.as_u64() == Some(PROTOCOL_VERSION) => Ok(obj),
        Some(other) => Err(ProtocolError::Version(other.to_string())),
        None => Err(malformed("missing version")),
    }
}

fn str_field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a str, ProtocolError> {
    obj.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| malformed(format!("missing or non-string {key:?}")))
}

fn msg_type(obj: &Map<String, Value>) -> Result<&str, ProtocolError> {
    str_field(obj, "type")
}

fn term_from_json(v: &Value) -> Result<Term, ProtocolError> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| malformed("term must be a 2-element array"))?;
    let value = pair[1].as_str().ok_or_else(|| malformed("term value must be a string"))?;
    match pair[0].as_str() {
        Some("iri") => Term::iri(value).map_err(|e| malformed(e.to_string())),
        Some("lit") => Ok(Term::literal(value)),
        _ => Err(malformed("term kind must be \"iri\" or \"lit\"")),
    }
}

pub fn triple_from_json(v: &Value) -> Result<Triple, ProtocolError> {
    let parts = v
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| malformed("triple must be a 3-element array"))?;
    Triple::new(
        term_from_json(&parts[0])?,
        term_from_json(&parts[1])?,
        term_from_json(&parts[2])?,
    )
    .map_err(|e| malformed(e.to_string()))
}

pub fn triples_from_json(v: Option<&Value>) -> Result<Vec<Triple>, ProtocolError> {
    v.and_then(Value::as_array)
        .ok_or_else(|| malformed("missing triples array"))?
        .iter()
        .map(triple_from_json)
        .collect()
}

/// Agent side: decode a query line.
pub fn decode_request(line: &[u8]) -> Result<AgentRequest, ProtocolError> {
    let obj = envelope(line)?;
    match msg_type(&obj)? {
        "query" => {}
        other => return Err(ProtocolError::UnknownType(other.to_string())),
    }
    Ok(AgentRequest {
        request_iri: str_field(&obj, "id")?.to_string(),
        triples: triples_from_json(obj.get("triples"))?,
    })
}

/// Best-effort extraction of the `id` of a line that failed to decode, so
/// an error reply can still echo it.
pub fn peek_id(line: &[u8]) -> String {
    serde_json::from_slice::<Value>(line.strip_suffix(b"\n").unwrap_or(line))
        .ok()
        .and_then(|v| v.get("id").and_then(Value::as_str).map(str::to_string))
        .unwrap_or_default()
}

/// Client side: decode and validate a response to `expected_id`.
pub fn decode_response(line: &[u8], expected_id: &str) -> Result<AgentResponse, ResponseError> {
    let obj = envelope(line)?;
    let kind = msg_type(&obj)?.to_string();
    if kind != "results" && kind != "error" {
        return Err(ProtocolError::UnknownType(kind).into());
    }
    let id = str_field(&obj, "id")?;
    if id != expected_id {
        return Err(ProtocolError::IdMismatch {
            expected: expected_id.to_string(),
            found: id.to_string(),
        }
        .into());
    }
    if kind == "error" {
        return Err(AgentError {
            request_iri: id.to_string(),
            code: str_field(&obj, "code")?.to_string(),
            message: str_field(&obj, "message")?.to_string(),
        }
        .into());
    }
    let items = obj
        .get("items")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing items array"))?;
    let mut decoded = Vec::with_capacity(items.len());
    for item in items {
        let title = item
            .get("title")
            .and_then(Value::as_str)
            .ok_or_else(|| malformed("item without title"))?;
        let relevance_value = item
            .get("relevance")
            .ok_or_else(|| malformed("item without relevance"))?;
        let relevance = relevance_value
            .as_f64()
            .ok_or_else(|| malformed("relevance must be a number"))?;
        if !(0.0..=1.0).contains(&relevance) {
            return Err(ProtocolError::RelevanceOutOfRange(relevance_value.to_string()).into());
        }
        decoded.push(ResponseItem {
            title: title.to_string(),
            triples: triples_from_json(item.get("triples"))?,
            relevance,
        });
    }
    Ok(AgentResponse {
        request_iri: id.to_string(),
        items: decoded,
    })
}

#[derive(Debug, Error)]
pub enum ReadLineError {
    #[error("peer closed the connection before sending a line")]
    Closed,
    #[error("line exceeds {MAX_LINE} bytes")]
    Oversize,
    #[error("connection closed mid-line")]
    Truncated,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Read one `\n`-terminated line of at most `MAX_LINE` bytes.
pub async fn read_line<R: AsyncBufRead + Unpin>(reader: &mut R) -> Result<Vec<u8>, ReadLineError> {
    let mut buf = Vec::new();
    let mut limited = reader.take(MAX_LINE as u64 + 1);
    limited.read_until(b'\n', &mut buf).await?;
    if buf.len() > MAX_LINE {
        return Err(ReadLineError::Oversize);
    }
    match buf.last() {
        Some(b'\n') => Ok(buf),
        None => Err(ReadLineError::Closed),
        Some(_) => Err(ReadLineError::Truncated),
    }
}

/// Convenience for building a store from decoded triples.
pub fn to_store(triples: &[Triple]) -> TripleStore {
    triples.iter().cloned().collect()
}
