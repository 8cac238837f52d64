use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use soas::comm::Network;
use soas::fixtures;
use soas::locator::Endpoint;
use soas::pipeline::{
    format_error, format_report, ConfigError, OutputFormat, Pipeline, PipelineConfig,
};
use soas::runtime::{serve_agent, KnowledgeBase};

const EXIT_REPORT_ERROR: u8 = 1;
const EXIT_CONFIG_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "soas", version, about = "Semantic agent-based search over triple knowledge bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one free-text request through the pipeline.
    Query(QueryArgs),
    /// Agent runtime commands.
    Agents {
        #[command(subcommand)]
        command: AgentsCommand,
    },
}

#[derive(clap::Args)]
struct QueryArgs {
    /// The request text. Omit with --stdin.
    #[arg(required_unless_present = "stdin", conflicts_with = "stdin")]
    text: Option<String>,
    /// Lexicon TSV file (defaults to the built-in fixture lexicon).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Agent catalog triple file (defaults to the built-in fixture catalog).
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Per-agent timeout in milliseconds.
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// text or json (default json).
    #[arg(long, value_parser = clap::value_parser!(OutputFormat))]
    format: Option<OutputFormat>,
    /// Append results to this journal (replayed on start).
    #[arg(long)]
    journal: Option<PathBuf>,
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Serve the fixture agents in-process and route the catalog to them.
    #[arg(long)]
    spawn_fixture_agents: bool,
    /// Read one request per line from standard input.
    #[arg(long)]
    stdin: bool,
}

#[derive(Subcommand)]
enum AgentsCommand {
    /// Serve a knowledge base until interrupted.
    Serve {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        domain: String,
        /// e.g. tcp://127.0.0.1:7101
        #[arg(long)]
        listen: String,
    },
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("soas: {msg}");
    ExitCode::from(EXIT_CONFIG_ERROR)
}

fn build_config(args: &QueryArgs) -> Result<PipelineConfig, ConfigError> {
    let mut cfg = PipelineConfig::default();
    if args.timeout_ms.is_none() {
        cfg.timeout_ms = PipelineConfig::default_timeout_from_env()?;
    }
    if let Some(path) = &args.config {
        cfg = cfg.with_file(path)?;
    }
    if let Some(p) = &args.lexicon {
        cfg.lexicon_path = Some(p.clone());
    }
    if let Some(p) = &args.catalog {
        cfg.catalog_path = Some(p.clone());
    }
    if let Some(t) = args.timeout_ms {
        cfg.timeout_ms = t;
    }
    if let Some(f) = args.format {
        cfg.output_format = f;
    }
    if let Some(p) = &args.journal {
        cfg.journal_path = Some(p.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

async fn run_query(args: QueryArgs) -> ExitCode {
    let cfg = match build_config(&args) {
        Ok(cfg) => cfg,
        Err(e) => return config_error(e),
    };
    let network = Network::new();
    let mut pipeline = match Pipeline::from_config(&cfg, network.clone()) {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    let mut _agents = Vec::new();
    if args.spawn_fixture_agents {
        match fixtures::spawn_fixture_agents(&network, pipeline.catalog()).await {
            Ok((catalog, handles)) => {
                if let Err(e) = pipeline.set_catalog(catalog) {
                    return config_error(e);
                }
                _agents = handles;
            }
            Err(e) => return config_error(e),
        }
    }

    let requests: Vec<String> = if args.stdin {
        let stdin = std::io::stdin();
        let mut lines = Vec::new();
        for line in stdin.lock().lines() {
            match line {
                Ok(l) if l.trim().is_empty() => {}
                Ok(l) => lines.push(l),
                Err(e) => return config_error(format!("reading stdin: {e}")),
            }
        }
        lines
    } else {
        vec![args.text.clone().unwrap_or_default()]
    };

    let mut status = ExitCode::SUCCESS;
    let mut stdout = std::io::stdout().lock();
    for raw in &requests {
        match pipeline.handle_request(raw).await {
            Ok(report) => {
                let _ = stdout.write_all(format_report(&report, cfg.output_format).as_bytes());
            }
            Err(err) => {
                eprintln!("soas: stage {}: {err} ({})", err.stage.as_str(), err.code());
                if cfg.output_format == OutputFormat::Json {
                    let _ = stdout.write_all(format_error(&err, cfg.output_format).as_bytes());
                }
                status = ExitCode::from(EXIT_REPORT_ERROR);
            }
        }
    }
    let _ = stdout.flush();
    status
}

async fn run_serve(kb: PathBuf, domain: String, listen: String) -> ExitCode {
    let endpoint: Endpoint = match listen.parse() {
        Ok(e) => e,
        Err(e) => return config_error(e),
    };
    if matches!(endpoint, Endpoint::Inproc(_)) {
        return config_error("inproc endpoints are only reachable inside one process; use tcp://");
    }
    let kb = match KnowledgeBase::load(&kb, domain) {
        Ok(kb) => kb,
        Err(e) => return config_error(e),
    };
    let handle = match serve_agent(Arc::new(kb), &endpoint, &Network::new()).await {
        Ok(h) => h,
        Err(e) => return config_error(e),
    };
    println!("listening on {}", handle.endpoint());
    let _ = std::io::stdout().flush();
    let _ = tokio::signal::ctrl_c().await;
    handle.shutdown().await;
    ExitCode::SUCCESS
}

#[tokio::main]
async fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Query(args) => run_query(args).await,
        Command::Agents {
            command: AgentsCommand::Serve { kb, domain, listen },
        } => run_serve(kb, domain, listen).await,
    }
}
