//! A standalone agent process, the same as `soas agents serve`.
//!
//!     cargo run --example soas_agent -- --kb crates/core/fixtures/travel-a1.nt \
//!         --domain travel --listen tcp://127.0.0.1:7101

use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;

use soas::comm::Network;
use soas::locator::Endpoint;
use soas::runtime::{serve_agent, KnowledgeBase};

#[derive(Parser)]
#[command(name = "soas-agent")]
struct Args {
    #[arg(long)]
    kb: PathBuf,
    #[arg(long)]
    domain: String,
    #[arg(long)]
    listen: Endpoint,
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let kb = KnowledgeBase::load(&args.kb, args.domain)?;
    println!("{} items in {}", kb.items.len(), args.kb.display());
    let handle = serve_agent(Arc::new(kb), &args.listen, &Network::new()).await?;
    println!("listening on {}", handle.endpoint());
    tokio::signal::ctrl_c().await?;
    handle.shutdown().await;
    Ok(())
}
