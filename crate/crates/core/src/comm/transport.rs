use std::collections::HashMap;
use std::io;
use std::sync::{Arc, Mutex};

use tokio::io::{AsyncRead, AsyncWrite, DuplexStream};
use tokio::net::TcpStream;
use tokio::sync::mpsc;

use crate::locator::Endpoint;

/// A bidirectional byte stream to or from an agent.
pub trait Connection: AsyncRead + AsyncWrite + Unpin + Send {}

impl<T: AsyncRead + AsyncWrite + Unpin + Send> Connection for T {}

pub type BoxedConnection = Box<dyn Connection>;

const INPROC_BUFFER: usize = 64 * 1024;

/// One outbound connection attempt, in call order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportEvent {
    pub endpoint: String,
}

#[derive(Default)]
struct NetworkInner {
    inproc: Mutex<HashMap<String, mpsc::UnboundedSender<DuplexStream>>>,
    log: Mutex<Vec<TransportEvent>>,
}

/// Connects to `tcp://` and `inproc://` endpoints.
///
/// The `inproc` registry is scoped to one `Network` value, so independent
/// pipelines (and tests) never see each other's in-process agents. Clones
/// share the registry and the call log.
#[derive(Clone, Default)]
pub struct Network {
    inner: Arc<NetworkInner>,
}

impl std::fmt::Debug for Network {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Network")
            .field("inproc", &self.inproc_names())
            .finish()
    }
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    pub async fn connect(&self, endpoint: &Endpoint) -> io::Result<BoxedConnection> {
        self.inner
            .log
            .lock()
            .expect("log lock")
            .push(TransportEvent {
                endpoint: endpoint.to_string(),
            });
        match endpoint {
            Endpoint::Tcp { host, port } => {
                let stream = TcpStream::connect((host.as_str(), *port)).await?;
                stream.set_nodelay(true)?;
                Ok(Box::new(stream))
            }
            Endpoint::Inproc(name) => {
                let sender = self
                    .inner
                    .inproc
                    .lock()
                    .expect("registry lock")
                    .get(name)
                    .cloned();
                let refused = || {
                    io::Error::new(
                        io::ErrorKind::ConnectionRefused,
                        format!("no in-process agent at inproc://{name}"),
                    )
                };
                let sender = sender.ok_or_else(refused)?;
                let (client, server) = tokio::io::duplex(INPROC_BUFFER);
                sender.send(server).map_err(|_| refused())?;
                Ok(Box::new(client))
            }
        }
    }

    /// Register an in-process listener; incoming connections arrive on the
    /// returned channel.
    pub fn bind_inproc(&self, name: &str) -> io::Result<mpsc::UnboundedReceiver<DuplexStream>> {
        let mut registry = self.inner.inproc.lock().expect("registry lock");
        if registry.get(name).is_some_and(|s| !s.is_closed()) {
            return Err(io::Error::new(
                io::ErrorKind::AddrInUse,
                format!("inproc://{name} is already bound"),
            ));
        }
        let (tx, rx) = mpsc::unbounded_channel();
        registry.insert(name.to_string(), tx);
        Ok(rx)
    }

    pub fn unbind_inproc(&self, name: &str) {
        self.inner.inproc.lock().expect("registry lock").remove(name);
    }

    pub fn inproc_names(&self) -> Vec<String> {
        let mut names: Vec<_> = self
            .inner
            .inproc
            .lock()
            .expect("registry lock")
            .keys()
            .cloned()
            .collect();
        names.sort();
        names
    }

    /// Every connection attempt made through this network so far.
    pub fn call_log(&self) -> Vec<TransportEvent> {
        self.inner.log.lock().expect("log lock").clone()
    }
}
