//! Subcommand implementations. Each returns an [`Outcome`]; `main` turns it
//! into an exit code and a run record.

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{ensure, Context, Result};
use clap::Args;
use edgebal_core::annealer::{ProgressRecord, SearchCheckpoint, SearchObserver};
use edgebal_core::automorphism::{aut_order_with_budget, DEFAULT_NODE_BUDGET};
use edgebal_core::census::{profile4_bruteforce, DEFAULT_QUAD_BUDGET, DEFAULT_TRIPLE_BUDGET};
use edgebal_core::verifier::{verify_certificate_with, ClassIndex};
use edgebal_core::{
    exhaustive_small_n, index_lambda, lambda_for_class, profile2, profile3, profile3_bruteforce, run_search_with,
    scan_admissible, target_profile, template_aut_order, AnnealConfig, AutResult, Certificate, GraphClass,
    LabeledGraph, SearchResult, VerifyOptions,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{load_graph, InputFormat, LoadedGraph};
use crate::table;

pub struct Outcome {
    /// Exit 0 when true, 1 otherwise.
    pub positive: bool,
    pub summary: Value,
    pub artifacts: Vec<PathBuf>,
    pub seed: Option<u64>,
    /// Resolved configuration, when it differs from the raw flags.
    pub config: Option<Value>,
}

impl Outcome {
    fn ok(summary: Value) -> Self {
        Outcome {
            positive: true,
            summary,
            artifacts: Vec::new(),
            seed: None,
            config: None,
        }
    }
}

/// Prints `value` as JSON, or `text` under `--pretty`, and optionally
/// stores the JSON at `out`.
fn emit<T: Serialize>(value: &T, pretty: bool, text: impl FnOnce() -> String, out: Option<&Path>) -> Result<()> {
    let doc = serde_json::to_string_pretty(value)?;
    if let Some(path) = out {
        write_file(path, (doc.clone() + "\n").as_bytes())?;
    }
    if pretty {
        print!("{}", text());
    } else {
        println!("{doc}");
    }
    Ok(())
}

/// Writes through a temporary sibling so readers never see a torn file.
fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))
}

#[derive(Args, Debug, Serialize)]
pub struct GraphInput {
    /// Graph file: graph6, edge list, or certificate JSON; `-` for stdin.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: InputFormat,
    /// Vertex count for edge-list input.
    #[arg(long = "vertices", value_name = "N")]
    pub vertices: Option<usize>,
}

impl GraphInput {
    fn load(&self) -> Result<LoadedGraph> {
        load_graph(&self.input, self.format, self.vertices)
    }
}

// scan ----------------------------------------------------------------------

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    /// Largest n to scan.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Stop after this many pairs (20 when no bound is given).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: Option<u64>,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Serialize)]
struct Pair {
    n: usize,
    k: usize,
}

pub fn scan(args: &ScanArgs) -> Result<Outcome> {
    let limit = match (args.n_max, args.limit) {
        (None, None) => Some(20),
        (_, l) => l.map(|l| l as usize),
    };
    let pairs: Vec<Pair> = scan_admissible(args.n_max, limit)?
        .into_iter()
        .map(|(n, k)| Pair { n, k })
        .collect();
    let doc = json!({ "count": pairs.len(), "pairs": pairs });
    emit(
        &doc,
        args.pretty,
        || {
            let rows: Vec<Vec<String>> = pairs
                .iter()
                .enumerate()
                .map(|(i, p)| vec![(i + 1).to_string(), p.n.to_string(), p.k.to_string()])
                .collect();
            table::render(&["#", "n", "k"], &rows)
        },
        None,
    )?;
    Ok(Outcome::ok(json!({ "count": pairs.len() })))
}

// target --------------------------------------------------------------------

#[derive(Args, Debug, Serialize)]
pub struct TargetArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Serialize)]
struct TargetReport {
    n: usize,
    k: usize,
    c: u64,
    p: u64,
    s: u64,
    d: u64,
    m: u64,
    a: u64,
    b: u64,
    triples: String,
    pairs: String,
}

pub fn target(args: &TargetArgs) -> Result<Outcome> {
    let t = target_profile(args.n, args.k)?;
    let p = t.profile3;
    let report = TargetReport {
        n: t.n,
        k: t.k,
        c: p.c,
        p: p.p,
        s: p.s,
        d: p.d,
        m: p.m,
        a: t.profile2.a,
        b: t.profile2.b,
        triples: p.total().to_string(),
        pairs: t.profile2.total().to_string(),
    };
    emit(
        &report,
        args.pretty,
        || {
            table::pairs(&[
                ("n", report.n.to_string()),
                ("k", report.k.to_string()),
                ("K3", report.c.to_string()),
                ("P4", report.p.to_string()),
                ("K1,3", report.s.to_string()),
                ("P3+K2", report.d.to_string()),
                ("3K2", report.m.to_string()),
                ("P3", report.a.to_string()),
                ("2K2", report.b.to_string()),
                ("C(k,3)", report.triples.clone()),
                ("C(k,2)", report.pairs.clone()),
            ])
        },
        None,
    )?;
    Ok(Outcome::ok(json!({ "n": t.n, "k": t.k })))
}

// search --------------------------------------------------------------------

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(long, required_unless_present = "resume")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "resume")]
    pub k: Option<usize>,
    /// Initial temperature.
    #[arg(long, default_value_t = 1.0)]
    pub t0: f64,
    /// Cooling factor per step; by default chosen to reach 1e-3 at the end.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Steps per restart.
    #[arg(long, default_value_t = 2_000_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Master seed; generated and recorded when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Score weights for K3, P4, K1,3, P3+K2, 3K2.
    #[arg(long, value_delimiter = ',', num_args = 5, default_values_t = [1u64, 1, 1, 1, 1])]
    pub weights: Vec<u64>,
    /// Worker threads; 0 uses all available cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, default_value_t = 100_000)]
    pub progress_interval: u64,
    #[arg(long, default_value_t = 100_000)]
    pub audit_interval: u64,
    #[arg(long, default_value_t = 100_000)]
    pub checkpoint_interval: u64,
    /// Output directory (default: `<out-dir>/search-n<N>-k<K>-s<SEED>`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Continue from a checkpoint file; search parameters come from it.
    #[arg(long, value_name = "CHECKPOINT")]
    pub resume: Option<PathBuf>,
    #[arg(long)]
    pub pretty: bool,
}

pub const RESULT_FILE: &str = "result.json";
pub const BEST_FILE: &str = "best.g6";
pub const PROGRESS_FILE: &str = "progress.jsonl";
pub const CHECKPOINT_FILE: &str = "checkpoint.json";
pub const CERTIFICATE_FILE: &str = "certificate.json";

fn fresh_seed() -> u64 {
    let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos());
    (nanos as u64) ^ ((std::process::id() as u64) << 32)
}

struct FileObserver {
    progress: BufWriter<File>,
    checkpoint: Option<PathBuf>,
    error: Option<anyhow::Error>,
}

impl FileObserver {
    fn note(&mut self, r: Result<()>) {
        if let Err(e) = r {
            self.error.get_or_insert(e);
        }
    }
}

impl SearchObserver for FileObserver {
    fn on_progress(&mut self, record: &ProgressRecord) {
        let r = serde_json::to_string(record)
            .map_err(anyhow::Error::from)
            .and_then(|line| writeln!(self.progress, "{line}").map_err(anyhow::Error::from));
        self.note(r);
    }

    fn on_checkpoint(&mut self, checkpoint: &SearchCheckpoint) {
        if let Some(path) = self.checkpoint.clone() {
            let r = serde_json::to_vec(checkpoint)
                .map_err(anyhow::Error::from)
                .and_then(|bytes| write_file(&path, &bytes));
            self.note(r);
        }
    }
}

pub fn search(args: &SearchArgs, out_dir: &Path) -> Result<Outcome> {
    let resume: Option<SearchCheckpoint> = match &args.resume {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
        }
        None => None,
    };
    let (n, k, config) = match &resume {
        Some(cp) => {
            for (flag, given, stored) in [("--n", args.n, cp.n), ("--k", args.k, cp.k)] {
                ensure!(
                    given.is_none_or(|g| g == stored),
                    "{flag} disagrees with the checkpoint ({stored})"
                );
            }
            let config = AnnealConfig {
                threads: args.threads,
                ..cp.config.clone()
            };
            (cp.n, cp.k, config)
        }
        None => {
            let weights: [u64; 5] = args
                .weights
                .as_slice()
                .try_into()
                .context("--weights takes five values")?;
            let config = AnnealConfig {
                t0: args.t0,
                alpha: args.alpha,
                steps: args.steps,
                restarts: args.restarts,
                seed: args.seed.unwrap_or_else(fresh_seed),
                score_weights: weights,
                audit_interval: args.audit_interval,
                progress_interval: args.progress_interval,
                checkpoint_interval: args.checkpoint_interval,
                threads: args.threads,
            };
            (args.n.unwrap_or_default(), args.k.unwrap_or_default(), config)
        }
    };
    // Refuse inadmissible pairs before touching the file system.
    target_profile(n, k)?;
    config.validate()?;

    let dir = match (&args.out, &args.resume) {
        (Some(d), _) => d.clone(),
        (None, Some(cp)) => cp.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf),
        (None, None) => out_dir.join(format!("search-n{n}-k{k}-s{}", config.seed)),
    };
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let progress_path = dir.join(PROGRESS_FILE);
    let checkpoint_path = dir.join(CHECKPOINT_FILE);
    let progress = OpenOptions::new()
        .create(true)
        .write(true)
        .append(resume.is_some())
        .truncate(resume.is_none())
        .open(&progress_path)
        .with_context(|| format!("opening {}", progress_path.display()))?;
    let mut observer = FileObserver {
        progress: BufWriter::new(progress),
        checkpoint: (config.checkpoint_interval > 0).then(|| checkpoint_path.clone()),
        error: None,
    };

    let result = run_search_with(n, k, &config, resume.as_ref(), &mut observer)?;
    observer.progress.flush().context("flushing progress log")?;
    if let Some(e) = observer.error {
        return Err(e.context("writing search artifacts"));
    }

    let final_checkpoint = SearchCheckpoint {
        n,
        k,
        config: config.clone(),
        completed: result.chains.clone(),
        active: Vec::new(),
    };
    write_file(&checkpoint_path, &serde_json::to_vec(&final_checkpoint)?)?;
    let result_path = dir.join(RESULT_FILE);
    write_file(&result_path, (serde_json::to_string_pretty(&result)? + "\n").as_bytes())?;
    let best_path = dir.join(BEST_FILE);
    write_file(&best_path, format!("{}\n", result.best_graph6).as_bytes())?;
    let mut artifacts = vec![result_path, best_path, progress_path, checkpoint_path];

    let mut certified = None;
    if result.found() {
        let cert = edgebal_core::verify_certificate(&result.best_graph()?, n, k)?;
        let path = dir.join(CERTIFICATE_FILE);
        write_file(&path, (serde_json::to_string_pretty(&cert)? + "\n").as_bytes())?;
        artifacts.push(path);
        certified = Some(cert.balanced);
    }

    emit(&result, args.pretty, || search_text(&result, &dir, certified), None)?;
    Ok(Outcome {
        positive: result.found(),
        summary: json!({
            "n": n,
            "k": k,
            "found": result.found(),
            "best_score": result.best_score.to_string(),
            "restart": result.restart,
            "step": result.step,
            "certified": certified,
            "wall_clock_secs": result.wall_clock_secs,
        }),
        artifacts,
        seed: Some(config.seed),
        config: Some(json!({ "n": n, "k": k, "anneal": config, "resumed_from": args.resume })),
    })
}

fn search_text(r: &SearchResult, dir: &Path, certified: Option<bool>) -> String {
    let status = if r.found() { "zero score" } else { "no zero-score graph" };
    table::pairs(&[
        ("n, k", format!("{}, {}", r.n, r.k)),
        ("status", status.into()),
        ("best score", r.best_score.to_string()),
        ("restart, step", format!("{}, {}", r.restart, r.step)),
        ("graph6", r.best_graph6.clone()),
        ("certified", certified.map_or("-".into(), |b| b.to_string())),
        ("seed", r.config.seed.to_string()),
        ("alpha", format!("{:.9}", r.alpha)),
        ("seconds", format!("{:.2}", r.wall_clock_secs)),
        ("output", dir.display().to_string()),
    ])
}

// verify --------------------------------------------------------------------

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Expected vertex count (default: the graph's).
    #[arg(long)]
    pub n: Option<usize>,
    /// Expected edge count (default: the graph's).
    #[arg(long)]
    pub k: Option<usize>,
    /// Also write the certificate here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest triple count enumerated before falling back to closed form.
    #[arg(long, default_value_t = DEFAULT_TRIPLE_BUDGET as u64)]
    pub triple_budget: u64,
    /// Largest quadruple count enumerated for the 4-edge report.
    #[arg(long, default_value_t = DEFAULT_QUAD_BUDGET as u64)]
    pub quad_budget: u64,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub aut_budget: u64,
    #[arg(long)]
    pub pretty: bool,
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let loaded = load_graph(&args.graph.input, args.graph.format, args.graph.vertices.or(args.n))?;
    let g = loaded.graph;
    let (n, k) = (args.n.unwrap_or(g.n()), args.k.unwrap_or(g.k()));
    let options = VerifyOptions {
        triple_budget: args.triple_budget as u128,
        quad_budget: args.quad_budget as u128,
        aut_budget: args.aut_budget,
    };
    let cert = verify_certificate_with(&g, n, k, &options)?;
    let claim_mismatch = loaded.certificate.as_ref().is_some_and(|c| c.balanced != cert.balanced);
    if claim_mismatch {
        eprintln!("warning: input certificate claims balanced = {}", !cert.balanced);
    }
    emit(&cert, args.pretty, || verify_text(&cert), args.out.as_deref())?;
    Ok(Outcome {
        positive: cert.balanced,
        summary: json!({
            "n": n,
            "k": k,
            "balanced": cert.balanced,
            "independent": cert.independent,
            "claim_mismatch": claim_mismatch,
        }),
        artifacts: args.out.iter().cloned().collect(),
        seed: None,
        config: None,
    })
}

fn verify_text(c: &Certificate) -> String {
    let p = c.profile3;
    let t = c.target.profile3;
    let rows: Vec<Vec<String>> = GraphClass::THREE_EDGE
        .iter()
        .zip(p.as_array().iter().zip(t.as_array()))
        .map(|(class, (&got, want))| {
            let mark = if got == want { "" } else { "*" };
            vec![class.to_string(), got.to_string(), want.to_string(), mark.into()]
        })
        .collect();
    let mut out = table::render(&["class", "count", "target", ""], &rows);
    out.push('\n');
    let mut items = vec![
        ("balanced", c.balanced.to_string()),
        ("2-edge balanced", c.two_edge_balanced.to_string()),
        ("method", format!("{:?}", c.profile_method)),
        ("|Aut(G)|", c.aut.order.to_string()),
    ];
    if let Some(ix) = &c.index {
        items.push(("lambda", format!("{} * {}!", ix.factor, ix.base)));
    }
    if let Some(f) = &c.four_edge {
        items.push(("distinct 4-edge lambdas", f.distinct_present_lambdas.to_string()));
    }
    out.push_str(&table::pairs(&items));
    out
}

// census --------------------------------------------------------------------

#[derive(Args, Debug, Serialize)]
pub struct CensusArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Count by enumeration instead of closed form.
    #[arg(long)]
    pub brute: bool,
    /// Include 4-edge counts (by enumeration).
    #[arg(long)]
    pub four: bool,
    #[arg(long, default_value_t = DEFAULT_QUAD_BUDGET as u64)]
    pub quad_budget: u64,
    #[arg(long)]
    pub pretty: bool,
}

pub fn census(args: &CensusArgs) -> Result<Outcome> {
    let g = args.graph.load()?.graph;
    let p3 = if args.brute {
        profile3_bruteforce(&g, u128::MAX)?
    } else {
        profile3(&g)
    };
    let p4 = if args.four {
        Some(profile4_bruteforce(&g, args.quad_budget as u128)?)
    } else {
        None
    };
    let doc = json!({
        "n": g.n(),
        "k": g.k(),
        "profile2": profile2(&g),
        "profile3": p3,
        "profile4": p4,
    });
    emit(
        &doc,
        args.pretty,
        || {
            let mut rows: Vec<Vec<String>> = Vec::new();
            let p2 = profile2(&g);
            rows.push(vec!["P3".into(), p2.a.to_string()]);
            rows.push(vec!["2K2".into(), p2.b.to_string()]);
            for (class, count) in GraphClass::THREE_EDGE.iter().zip(p3.as_array()) {
                rows.push(vec![class.to_string(), count.to_string()]);
            }
            if let Some(p4) = &p4 {
                for (class, count) in p4.entries() {
                    rows.push(vec![class.to_string(), count.to_string()]);
                }
            }
            format!(
                "n = {}, k = {}\n{}",
                g.n(),
                g.k(),
                table::render(&["class", "count"], &rows)
            )
        },
        None,
    )?;
    Ok(Outcome::ok(json!({ "n": g.n(), "k": g.k() })))
}

// aut -----------------------------------------------------------------------

#[derive(Args, Debug, Serialize)]
pub struct AutArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub pretty: bool,
}

pub fn aut(args: &AutArgs) -> Result<Outcome> {
    let g = args.graph.load()?.graph;
    let r = aut_order_with_budget(&g, args.budget)?;
    let doc = json!({
        "n": g.n(),
        "k": g.k(),
        "order": r.order.to_string(),
        "support_order": r.support_order.to_string(),
        "isolated_count": r.isolated_count,
    });
    emit(
        &doc,
        args.pretty,
        || {
            table::pairs(&[
                ("|Aut(G)|", r.order.to_string()),
                ("support", r.support_order.to_string()),
                ("isolated", r.isolated_count.to_string()),
            ])
        },
        None,
    )?;
    Ok(Outcome::ok(json!({ "order": r.order.to_string() })))
}

// lambda --------------------------------------------------------------------

#[derive(Args, Debug, Serialize)]
pub struct LambdaArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub pretty: bool,
}

fn class_indices(g: &LabeledGraph, aut_g: &AutResult) -> Result<Vec<ClassIndex>> {
    let p2 = profile2(g);
    let p3 = profile3(g);
    let counts = [(GraphClass::P3, p2.a), (GraphClass::TwoK2, p2.b)]
        .into_iter()
        .chain(GraphClass::THREE_EDGE.into_iter().zip(p3.as_array()));
    let mut out = Vec::new();
    for (class, count) in counts {
        let Ok(aut_h) = template_aut_order(class, g.n()) else {
            continue;
        };
        out.push(ClassIndex {
            class,
            count,
            aut_order: aut_h.to_string(),
            lambda: lambda_for_class(count, &aut_h, &aut_g.order).to_string(),
        });
    }
    Ok(out)
}

pub fn lambda(args: &LambdaArgs) -> Result<Outcome> {
    let g = args.graph.load()?.graph;
    let aut = aut_order_with_budget(&g, args.budget)?;
    let classes = class_indices(&g, &aut)?;
    let uniform = |t: usize| {
        let ls: Vec<&str> = classes
            .iter()
            .filter(|c| c.class.edge_count() == t)
            .map(|c| c.lambda.as_str())
            .collect();
        !ls.is_empty() && ls.iter().all(|l| *l == ls[0] && *l != "0")
    };
    let balanced3 = g.n() >= 6 && uniform(3);
    let index = if balanced3 {
        Some(index_lambda(g.n(), profile3(&g).c, &aut)?)
    } else {
        None
    };
    let doc = json!({
        "n": g.n(),
        "k": g.k(),
        "aut_order": aut.order.to_string(),
        "classes": classes,
        "two_edge_balanced": uniform(2),
        "three_edge_balanced": balanced3,
        "index": index,
    });
    emit(
        &doc,
        args.pretty,
        || {
            let rows: Vec<Vec<String>> = classes
                .iter()
                .map(|c| vec![c.class.to_string(), c.count.to_string(), c.lambda.clone()])
                .collect();
            let mut s = table::render(&["class", "count", "lambda"], &rows);
            if let Some(ix) = &index {
                s.push_str(&format!("\nindex = {} * {}!\n", ix.factor, ix.base));
            }
            s
        },
        None,
    )?;
    Ok(Outcome::ok(json!({ "three_edge_balanced": balanced3 })))
}

// small-n -------------------------------------------------------------------

#[derive(Args, Debug, Serialize)]
pub struct SmallNArgs {
    #[arg(long)]
    pub pretty: bool,
}

pub fn small_n(args: &SmallNArgs) -> Result<Outcome> {
    let report = exhaustive_small_n()?;
    emit(
        &report,
        args.pretty,
        || {
            let rows: Vec<Vec<String>> = report
                .entries
                .iter()
                .map(|e| {
                    vec![
                        e.n.to_string(),
                        e.k.to_string(),
                        e.graphs_checked.to_string(),
                        e.balanced_found.to_string(),
                        e.min_spread.clone(),
                    ]
                })
                .collect();
            table::render(&["n", "k", "graphs", "balanced", "min spread"], &rows)
        },
        None,
    )?;
    Ok(Outcome {
        positive: report.none_balanced,
        ..Outcome::ok(json!({ "none_balanced": report.none_balanced }))
    })
}
