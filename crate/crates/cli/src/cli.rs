//! Command-line front end. Reports go to stdout as JSON using the same
//! payload types as the HTTP API; errors go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use deontix_core::annotation::Document;
use deontix_core::embedding::import_cnf;
use deontix_core::prover::{prove, ProverResult, ResourceLimits};

use crate::api::{self, AppState};
use crate::error::ApiError;
use crate::reports::{self, Outcome};
use crate::store::Store;

pub const EXIT_USAGE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "deontix", version, about = "Normative reasoning over annotated legal documents")]
pub struct Cli {
    #[command(flatten)]
    limits: LimitArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct LimitArgs {
    /// Longest connection path and largest world count tried.
    #[arg(long = "limits-depth", global = true)]
    depth: Option<u32>,
    /// Wall-clock budget per prover run, in milliseconds.
    #[arg(long = "limits-ms", global = true)]
    ms: Option<u64>,
    /// Ground atom budget for finite model search.
    #[arg(long = "limits-atoms", global = true)]
    atoms: Option<usize>,
}

impl LimitArgs {
    fn resolve(&self) -> Result<ResourceLimits, ApiError> {
        let d = ResourceLimits::default();
        let limits = ResourceLimits {
            max_depth: self.depth.unwrap_or(d.max_depth),
            time_budget_ms: self.ms.unwrap_or(d.time_budget_ms),
            max_ground_atoms: self.atoms.unwrap_or(d.max_ground_atoms),
        };
        limits.validate()?;
        Ok(limits)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Consistency of a legislation document.
    Check { document: PathBuf },
    /// Consistency plus per-formula independence.
    Independence { document: PathBuf },
    /// Whether a legislation document entails a query document's goal.
    Query { query: PathBuf, legislation: PathBuf },
    /// Runs the `Test `-prefixed query documents against a legislation document.
    Test {
        legislation: PathBuf,
        #[arg(required = true)]
        queries: Vec<PathBuf>,
    },
    /// Writes the clause set handed to the prover as a CNF problem file.
    Export {
        document: PathBuf,
        output: PathBuf,
        /// Export the query problem for this query document instead of the
        /// consistency problem.
        #[arg(long)]
        query: Option<PathBuf>,
    },
    /// Runs the prover on a CNF problem file.
    Prove { problem: PathBuf },
    /// Term vocabulary across documents.
    Vocabulary {
        #[arg(required = true)]
        documents: Vec<PathBuf>,
    },
    /// Serves the REST API.
    Serve {
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Simultaneous prover runs before requests are rejected with 503.
        #[arg(long, default_value_t = api::DEFAULT_MAX_PROVERS)]
        max_provers: usize,
        /// Allow cross-origin requests, for a UI served from another origin.
        #[arg(long)]
        cors: bool,
    },
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct ExportSummary {
    document: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    query: Option<String>,
    clauses: usize,
    output: PathBuf,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct ProveReport {
    problem: PathBuf,
    #[serde(flatten)]
    result: ProverResult,
    elapsed_ms: u64,
    limits_used: ResourceLimits,
}

fn io_error(path: &Path, e: std::io::Error) -> ApiError {
    ApiError::new(400, "io_error", format!("{}: {e}", path.display()))
}

pub fn read_document(path: &Path) -> Result<Document, ApiError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut doc: Document = serde_json::from_str(&text).map_err(|e| {
        let mut err = ApiError::bad_json(&e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })?;
    doc.normalize()?;
    Ok(doc)
}

fn emit<T: Serialize>(out: &mut dyn Write, report: &T) -> Result<(), ApiError> {
    let text = serde_json::to_string_pretty(report).map_err(|e| ApiError::internal(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| ApiError::internal(e.to_string()))
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = emit(err, &e);
            EXIT_USAGE
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<Outcome, ApiError> {
    let limits = cli.limits.resolve()?;
    match cli.command {
        Command::Check { document } => {
            let r = reports::consistency(&read_document(&document)?, limits)?;
            emit(out, &r)?;
            Ok(r.outcome())
        }
        Command::Independence { document } => {
            let r = reports::independence(&read_document(&document)?, limits)?;
            emit(out, &r)?;
            Ok(r.outcome())
        }
        Command::Query { query, legislation } => {
            let r = reports::query(&read_document(&query)?, &read_document(&legislation)?, limits)?;
            emit(out, &r)?;
            Ok(Outcome::of_verdict(r.verdict))
        }
        Command::Test { legislation, queries } => {
            let law = read_document(&legislation)?;
            let docs = queries.iter().map(|p| read_document(p)).collect::<Result<Vec<_>, _>>()?;
            let r = reports::tests(&law, &docs, limits)?;
            emit(out, &r)?;
            Ok(reports::tests_outcome(&r))
        }
        Command::Export { document, output, query } => {
            let law = read_document(&document)?;
            let q = query.as_deref().map(read_document).transpose()?;
            let payload = reports::export(&law, q.as_ref())?;
            std::fs::write(&output, &payload.cnf).map_err(|e| io_error(&output, e))?;
            emit(
                out,
                &ExportSummary {
                    document: payload.document,
                    query: payload.query,
                    clauses: payload.clauses,
                    output,
                },
            )?;
            Ok(Outcome::Positive)
        }
        Command::Prove { problem } => {
            let text = std::fs::read_to_string(&problem).map_err(|e| io_error(&problem, e))?;
            let cs = import_cnf(&text).map_err(|e| ApiError::new(422, "cnf_syntax_error", e.to_string()))?;
            let start = std::time::Instant::now();
            let result = prove(&cs, limits);
            let outcome = match &result {
                ProverResult::Proved { .. } => Outcome::Positive,
                ProverResult::CounterSatisfiable { .. } => Outcome::Negative,
                ProverResult::Unknown { .. } => Outcome::Undecided,
            };
            emit(
                out,
                &ProveReport {
                    problem,
                    result,
                    elapsed_ms: start.elapsed().as_millis() as u64,
                    limits_used: limits,
                },
            )?;
            Ok(outcome)
        }
        Command::Vocabulary { documents } => {
            let docs = documents.iter().map(|p| read_document(p)).collect::<Result<Vec<_>, _>>()?;
            emit(out, &reports::vocabulary(&docs))?;
            Ok(Outcome::Positive)
        }
        Command::Serve {
            data_dir,
            port,
            host,
            max_provers,
            cors,
        } => {
            if max_provers == 0 {
                return Err(ApiError::new(400, "invalid_argument", "--max-provers must be at least 1"));
            }
            let store = Store::open(&data_dir)?;
            let state = AppState::new(store, max_provers, limits);
            serve(state, SocketAddr::new(host, port), cors)?;
            Ok(Outcome::Positive)
        }
    }
}

fn serve(state: AppState, addr: SocketAddr, cors: bool) -> Result<(), ApiError> {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .try_init();
    let runtime = tokio::runtime::Runtime::new().map_err(|e| ApiError::internal(e.to_string()))?;
    runtime.block_on(async move {
        let mut app = api::router(state);
        if cors {
            app = app.layer(tower_http::cors::CorsLayer::permissive());
        }
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| ApiError::new(400, "bind_error", format!("{addr}: {e}")))?;
        tracing::info!("listening on http://{addr}");
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| ApiError::internal(e.to_string()))
    })
}
