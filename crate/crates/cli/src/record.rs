//! Append-only JSON-lines log of invocations.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

pub const RUN_LOG: &str = "runs.jsonl";

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub subcommand: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub started_at: String,
    pub finished_at: String,
    pub exit_code: u8,
    pub outcome: Value,
    pub artifacts: Vec<PathBuf>,
    pub tool_version: String,
}

pub fn append(dir: &Path, record: &RunRecord) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(RUN_LOG);
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .with_context(|| format!("opening {}", path.display()))?;
    f.write_all(line.as_bytes())
        .with_context(|| format!("appending to {}", path.display()))
}
