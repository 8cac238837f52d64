//! Reference domain agents: a triple knowledge base per agent, a
//! constraint-ratio answering rule, and a server for both transports.

mod kb;
mod server;

pub use kb::{answer_query, KbError, KbItem, KnowledgeBase};
pub use server::{serve_agent, AgentHandle, BindFailed};
