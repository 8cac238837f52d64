//! Agent communication: wire protocol, transports, concurrent fan-out to
//! located agents and the result store that receives their answers.

mod client;
mod results;
mod transport;
pub mod wire;

pub use client::{query_agents, AgentOutcome, AgentReport, CommError, Phase};
pub use results::{fetch_results, JournalError, ResultRecord, ResultStore, StoreOp};
pub use transport::{BoxedConnection, Connection, Network, TransportEvent};
pub use wire::{
    decode_request, decode_response, encode_agent_request, encode_error, encode_request,
    encode_response, AgentError, AgentRequest, AgentResponse, MessageTooLarge, ProtocolError,
    ResponseError, ResponseItem, MAX_LINE, PROTOCOL_VERSION,
};
