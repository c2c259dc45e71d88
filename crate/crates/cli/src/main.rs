//! `edgebal`: search, census and certification of 3-edge-balanced graphs.

mod commands;
mod input;
mod record;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use chrono::Utc;
use clap::{Parser, Subcommand};

use commands::{AutArgs, CensusArgs, LambdaArgs, ScanArgs, SearchArgs, SmallNArgs, TargetArgs, VerifyArgs};
use record::RunRecord;

/// Exit status for a negative verification or a search that found nothing.
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "edgebal",
    version,
    about = "Search, census and certification of 3-edge-balanced graphs"
)]
struct Cli {
    /// Directory receiving the run log and default search output.
    #[arg(long, global = true, env = "EDGEBAL_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Skip appending to the run log.
    #[arg(long, global = true)]
    no_record: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List admissible (n, k) pairs in increasing order.
    Scan(ScanArgs),
    /// Print the forced subgraph profile for an admissible pair.
    Target(TargetArgs),
    /// Anneal toward a graph with the target profile.
    Search(SearchArgs),
    /// Certify a candidate graph by independent recount.
    Verify(VerifyArgs),
    /// Subgraph counts of a graph.
    Census(CensusArgs),
    /// Automorphism group order of a graph.
    Aut(AutArgs),
    /// Per-class indices of a graph.
    Lambda(LambdaArgs),
    /// Exhaustive check of every graph on four and five vertices.
    SmallN(SmallNArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Scan(_) => "scan",
            Command::Target(_) => "target",
            Command::Search(_) => "search",
            Command::Verify(_) => "verify",
            Command::Census(_) => "census",
            Command::Aut(_) => "aut",
            Command::Lambda(_) => "lambda",
            Command::SmallN(_) => "small-n",
        }
    }

    fn args_json(&self) -> serde_json::Value {
        let v = match self {
            Command::Scan(a) => serde_json::to_value(a),
            Command::Target(a) => serde_json::to_value(a),
            Command::Search(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
            Command::Census(a) => serde_json::to_value(a),
            Command::Aut(a) => serde_json::to_value(a),
            Command::Lambda(a) => serde_json::to_value(a),
            Command::SmallN(a) => serde_json::to_value(a),
        };
        v.unwrap_or(serde_json::Value::Null)
    }

    fn run(&self, out_dir: &std::path::Path) -> anyhow::Result<commands::Outcome> {
        match self {
            Command::Scan(a) => commands::scan(a),
            Command::Target(a) => commands::target(a),
            Command::Search(a) => commands::search(a, out_dir),
            Command::Verify(a) => commands::verify(a),
            Command::Census(a) => commands::census(a),
            Command::Aut(a) => commands::aut(a),
            Command::Lambda(a) => commands::lambda(a),
            Command::SmallN(a) => commands::small_n(a),
        }
    }
}

fn error_code(err: &anyhow::Error) -> u8 {
    let internal = err.chain().any(|c| {
        matches!(
            c.downcast_ref::<edgebal_core::Error>(),
            Some(edgebal_core::Error::Internal(_))
        )
    });
    if internal {
        EXIT_INTERNAL
    } else {
        EXIT_USAGE
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let started_at = Utc::now().to_rfc3339();
    let result = cli.command.run(&cli.out_dir);
    let finished_at = Utc::now().to_rfc3339();

    let (code, record) = match result {
        Ok(outcome) => {
            let code = if outcome.positive { 0 } else { EXIT_NEGATIVE };
            let record = RunRecord {
                subcommand: cli.command.name().into(),
                config: outcome.config.unwrap_or_else(|| cli.command.args_json()),
                seed: outcome.seed,
                started_at,
                finished_at,
                exit_code: code,
                outcome: outcome.summary,
                artifacts: outcome.artifacts,
                tool_version: env!("CARGO_PKG_VERSION").into(),
            };
            (code, record)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = error_code(&err);
            let record = RunRecord {
                subcommand: cli.command.name().into(),
                config: cli.command.args_json(),
                seed: None,
                started_at,
                finished_at,
                exit_code: code,
                outcome: serde_json::json!({ "error": format!("{err:#}") }),
                artifacts: Vec::new(),
                tool_version: env!("CARGO_PKG_VERSION").into(),
            };
            (code, record)
        }
    };
    if !cli.no_record {
        if let Err(e) = record::append(&cli.out_dir, &record) {
            eprintln!("warning: run log not written: {e:#}");
        }
    }
    ExitCode::from(code)
}
