use std::fmt;
use std::time::Duration;

use thiserror::Error;
use tokio::io::{AsyncWriteExt, BufReader};
use tokio::task::JoinSet;
use tokio::time::{timeout_at, Instant};

use super::results::ResultStore;
use super::transport::Network;
use super::wire::{
    decode_response, encode_request, read_line, AgentResponse, MessageTooLarge, ProtocolError,
    ReadLineError, ResponseError,
};
use crate::locator::AgentRecord;
use crate::rpu::QueryModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Connect,
    Send,
    Receive,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Connect => "connect",
            Self::Send => "send",
            Self::Receive => "receive",
        })
    }
}

/// What happened when contacting one agent.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentOutcome {
    /// Number of items stored.
    Ok(usize),
    Timeout(Phase),
    ConnectFailed(String),
    SendFailed(String),
    ReceiveFailed(String),
    ProtocolError(ProtocolError),
    AgentFailed { code: String, message: String },
}

impl AgentOutcome {
    pub fn is_failure(&self) -> bool {
        !matches!(self, Self::Ok(_))
    }

    /// Stable short label, free of OS-specific error text.
    pub fn label(&self) -> String {
        match self {
            Self::Ok(_) => "ok".into(),
            Self::Timeout(phase) => format!("timeout ({phase})"),
            Self::ConnectFailed(_) => "connect-failed".into(),
            Self::SendFailed(_) => "send-failed".into(),
            Self::ReceiveFailed(_) => "receive-failed".into(),
            Self::ProtocolError(e) => format!("protocol-error ({})", e.kind()),
            Self::AgentFailed { code, .. } => format!("agent-failed ({code})"),
        }
    }
}

impl fmt::Display for AgentOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ok(n) => write!(f, "ok ({n} items)"),
            Self::Timeout(phase) => write!(f, "timed out during {phase}"),
            Self::ConnectFailed(e) => write!(f, "connect failed: {e}"),
            Self::SendFailed(e) => write!(f, "send failed: {e}"),
            Self::ReceiveFailed(e) => write!(f, "receive failed: {e}"),
            Self::ProtocolError(e) => write!(f, "protocol error: {e}"),
            Self::AgentFailed { code, message } => write!(f, "agent error {code}: {message}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentReport {
    pub agent: AgentRecord,
    pub outcome: AgentOutcome,
}

#[derive(Debug, Error)]
pub enum CommError {
    #[error("no agents to contact")]
    NoAgents,
    #[error("timeout must be at least 1 ms")]
    InvalidTimeout,
    #[error(transparent)]
    Encode(#[from] MessageTooLarge),
    #[error("all {} agents failed", .0.len())]
    AllAgentsFailed(Vec<AgentReport>),
    #[error("result store write failed: {0}")]
    Store(#[from] std::io::Error),
}

async fn exchange(
    network: Network,
    agent: AgentRecord,
    request_iri: String,
    message: std::sync::Arc<Vec<u8>>,
    deadline: Instant,
) -> Result<AgentResponse, AgentOutcome> {
    let conn = match timeout_at(deadline, network.connect(&agent.endpoint)).await {
        Err(_) => return Err(AgentOutcome::Timeout(Phase::Connect)),
        Ok(Err(e)) => return Err(AgentOutcome::ConnectFailed(e.to_string())),
        Ok(Ok(c)) => c,
    };
    let mut conn = BufReader::new(conn);
    let send = async {
        conn.write_all(&message).await?;
        conn.flush().await
    };
    match timeout_at(deadline, send).await {
        Err(_) => return Err(AgentOutcome::Timeout(Phase::Send)),
        Ok(Err(e)) => return Err(AgentOutcome::SendFailed(e.to_string())),
        Ok(Ok(())) => {}
    }
    let line = match timeout_at(deadline, read_line(&mut conn)).await {
        Err(_) => return Err(AgentOutcome::Timeout(Phase::Receive)),
        Ok(Err(ReadLineError::Oversize)) => {
            return Err(AgentOutcome::ProtocolError(ProtocolError::Oversize))
        }
        Ok(Err(e)) => return Err(AgentOutcome::ReceiveFailed(e.to_string())),
        Ok(Ok(line)) => line,
    };
    // one exchange per connection; closing errors are irrelevant once we have the line
    let _ = conn.get_mut().shutdown().await;
    decode_response(&line, &request_iri).map_err(|e| match e {
        ResponseError::Protocol(p) => AgentOutcome::ProtocolError(p),
        ResponseError::AgentFailed(a) => AgentOutcome::AgentFailed {
            code: a.code,
            message: a.message,
        },
    })
}

/// Contact every agent concurrently, each with its own connection and its
/// own deadline of `timeout`, and append every valid response batch to
/// `store`.
///
/// Batches are appended in completion order; batches that complete together
/// are appended in agent IRI order. The returned reports follow the order
/// of `agents`.
pub async fn query_agents(
    network: &Network,
    agents: &[AgentRecord],
    model: &QueryModel,
    timeout: Duration,
    store: &ResultStore,
) -> Result<Vec<AgentReport>, CommError> {
    if agents.is_empty() {
        return Err(CommError::NoAgents);
    }
    if timeout < Duration::from_millis(1) {
        return Err(CommError::InvalidTimeout);
    }
    let message = std::sync::Arc::new(encode_request(model)?);
    let request_iri = model.request_iri.value().to_string();
    let deadline = Instant::now() + timeout;

    let mut tasks = JoinSet::new();
    for (idx, agent) in agents.iter().enumerate() {
        let fut = exchange(
            network.clone(),
            agent.clone(),
            request_iri.clone(),
            message.clone(),
            deadline,
        );
        tasks.spawn(async move { (idx, fut.await) });
    }

    let mut outcomes: Vec<Option<AgentOutcome>> = vec![None; agents.len()];
    while let Some(first) = tasks.join_next().await {
        let mut ready = vec![first.expect("agent task panicked")];
        while let Some(more) = tasks.try_join_next() {
            ready.push(more.expect("agent task panicked"));
        }
        ready.sort_by(|a, b| agents[a.0].agent_iri.cmp(&agents[b.0].agent_iri));
        for (idx, result) in ready {
            let outcome = match result {
                Ok(resp) => {
                    let n = resp.items.len();
                    store.append_batch(&request_iri, agents[idx].agent_iri.value(), resp.items)?;
                    AgentOutcome::Ok(n)
                }
                Err(outcome) => outcome,
            };
            outcomes[idx] = Some(outcome);
        }
    }

    let reports: Vec<AgentReport> = agents
        .iter()
        .zip(outcomes)
        .map(|(agent, outcome)| AgentReport {
            agent: agent.clone(),
            outcome: outcome.expect("every agent task reports"),
        })
        .collect();
    if reports.iter().all(|r| r.outcome.is_failure()) {
        return Err(CommError::AllAgentsFailed(reports));
    }
    Ok(reports)
}
