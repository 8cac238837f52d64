use std::io;
use std::sync::Arc;

use thiserror::Error;
use tokio::io::{AsyncWriteExt, BufReader};
use tokio::net::TcpListener;
use tokio::sync::watch;
use tokio::task::{JoinHandle, JoinSet};

use super::kb::{answer_query, KnowledgeBase};
use crate::comm::wire::{peek_id, read_line, ReadLineError};
use crate::comm::{
    decode_request, encode_error, encode_response, AgentError, BoxedConnection, Network,
};
use crate::locator::Endpoint;

#[derive(Debug, Error)]
#[error("cannot bind {endpoint}: {source}")]
pub struct BindFailed {
    pub endpoint: String,
    #[source]
    pub source: io::Error,
}

/// A running agent. Dropping the handle stops accepting new connections;
/// [`AgentHandle::shutdown`] also waits for in-flight exchanges to finish.
#[derive(Debug)]
pub struct AgentHandle {
    endpoint: Endpoint,
    stop: watch::Sender<bool>,
    task: Option<JoinHandle<()>>,
}

impl AgentHandle {
    /// The bound endpoint; for `tcp://host:0` this carries the real port.
    pub fn endpoint(&self) -> &Endpoint {
        &self.endpoint
    }

    pub async fn shutdown(mut self) {
        let _ = self.stop.send(true);
        if let Some(task) = self.task.take() {
            let _ = task.await;
        }
    }
}

impl Drop for AgentHandle {
    fn drop(&mut self) {
        let _ = self.stop.send(true);
    }
}

async fn respond(conn: BoxedConnection, kb: Arc<KnowledgeBase>) {
    let mut conn = BufReader::new(conn);
    let reply = match read_line(&mut conn).await {
        Ok(line) => match decode_request(&line) {
            Ok(req) => match answer_query(&kb, &req) {
                Ok(resp) => encode_response(&resp).unwrap_or_else(|e| {
                    encode_error(&AgentError {
                        request_iri: resp.request_iri.clone(),
                        code: "too-large".into(),
                        message: e.to_string(),
                    })
                }),
                Err(err) => encode_error(&err),
            },
            Err(e) => encode_error(&AgentError {
                request_iri: peek_id(&line),
                code: "bad-request".into(),
                message: e.to_string(),
            }),
        },
        Err(ReadLineError::Oversize) => encode_error(&AgentError {
            request_iri: String::new(),
            code: "bad-request".into(),
            message: ReadLineError::Oversize.to_string(),
        }),
        Err(_) => return,
    };
    let conn = conn.get_mut();
    if conn.write_all(&reply).await.is_ok() {
        let _ = conn.flush().await;
        let _ = conn.shutdown().await;
    }
}

async fn serve_loop<S, F, Fut>(mut accept: F, kb: Arc<KnowledgeBase>, mut stop: watch::Receiver<bool>, on_stop: S)
where
    F: FnMut() -> Fut,
    Fut: std::future::Future<Output = Option<BoxedConnection>>,
    S: FnOnce(),
{
    let mut in_flight = JoinSet::new();
    loop {
        tokio::select! {
            _ = stop.changed() => break,
            conn = accept() => match conn {
                Some(conn) => {
                    in_flight.spawn(respond(conn, kb.clone()));
                }
                None => break,
            },
            Some(_) = in_flight.join_next(), if !in_flight.is_empty() => {}
        }
    }
    on_stop();
    while in_flight.join_next().await.is_some() {}
}

/// Serve `kb` on `endpoint`: one request/response exchange per connection,
/// many connections concurrently.
pub async fn serve_agent(
    kb: Arc<KnowledgeBase>,
    endpoint: &Endpoint,
    network: &Network,
) -> Result<AgentHandle, BindFailed> {
    let (stop_tx, stop_rx) = watch::channel(false);
    let bind_failed = |source| BindFailed {
        endpoint: endpoint.to_string(),
        source,
    };
    match endpoint {
        Endpoint::Tcp { host, port } => {
            let listener = TcpListener::bind((host.as_str(), *port))
                .await
                .map_err(bind_failed)?;
            let local = listener.local_addr().map_err(bind_failed)?;
            let listener = Arc::new(listener);
            let task = tokio::spawn(serve_loop(
                move || {
                    let listener = listener.clone();
                    async move {
                        loop {
                            match listener.accept().await {
                                Ok((stream, _)) => {
                                    let _ = stream.set_nodelay(true);
                                    return Some(Box::new(stream) as BoxedConnection);
                                }
                                // transient accept errors (e.g. EMFILE); keep serving
                                Err(_) => tokio::task::yield_now().await,
                            }
                        }
                    }
                },
                kb,
                stop_rx,
                || {},
            ));
            Ok(AgentHandle {
                endpoint: Endpoint::Tcp {
                    host: host.clone(),
                    port: local.port(),
                },
                stop: stop_tx,
                task: Some(task),
            })
        }
        Endpoint::Inproc(name) => {
            let rx = network.bind_inproc(name).map_err(bind_failed)?;
            let rx = Arc::new(tokio::sync::Mutex::new(rx));
            let net = network.clone();
            let unbind_name = name.clone();
            let task = tokio::spawn(serve_loop(
                move || {
                    let rx = rx.clone();
                    async move {
                        rx.lock()
                            .await
                            .recv()
                            .await
                            .map(|s| Box::new(s) as BoxedConnection)
                    }
                },
                kb,
                stop_rx,
                move || net.unbind_inproc(&unbind_name),
            ));
            Ok(AgentHandle {
                endpoint: endpoint.clone(),
                stop: stop_tx,
                task: Some(task),
            })
        }
    }
}
