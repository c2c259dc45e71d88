//! Reading graphs from files or stdin.

use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use edgebal_core::graph::parse_edge_list;
use edgebal_core::{parse_graph6, Certificate, LabeledGraph};
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// Certificate JSON if the file starts with `{`, edge list if the first
    /// line is two integers, graph6 otherwise.
    #[default]
    Auto,
    Graph6,
    EdgeList,
    Certificate,
}

pub struct LoadedGraph {
    pub graph: LabeledGraph,
    pub certificate: Option<Certificate>,
}

fn read_source(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn detect(text: &str) -> InputFormat {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return InputFormat::Certificate;
    }
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let fields: Vec<&str> = first.split_whitespace().collect();
    if fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok()) {
        InputFormat::EdgeList
    } else {
        InputFormat::Graph6
    }
}

/// Loads one graph. `n` fixes the vertex count of edge lists, which cannot
/// express trailing isolated vertices on their own.
pub fn load_graph(path: &Path, format: InputFormat, n: Option<usize>) -> Result<LoadedGraph> {
    let text = read_source(path)?;
    let format = match format {
        InputFormat::Auto => detect(&text),
        f => f,
    };
    let origin = || format!("parsing {}", path.display());
    match format {
        InputFormat::Certificate => {
            let cert: Certificate = serde_json::from_str(&text).with_context(origin)?;
            let graph = cert.graph().with_context(origin)?;
            Ok(LoadedGraph {
                graph,
                certificate: Some(cert),
            })
        }
        InputFormat::EdgeList => Ok(LoadedGraph {
            graph: parse_edge_list(&text, n).with_context(origin)?,
            certificate: None,
        }),
        InputFormat::Graph6 | InputFormat::Auto => {
            let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
            let [line] = lines[..] else {
                bail!(
                    "{}: expected exactly one graph6 line, found {}",
                    path.display(),
                    lines.len()
                );
            };
            Ok(LoadedGraph {
                graph: parse_graph6(line).with_context(origin)?,
                certificate: None,
            })
        }
    }
}
