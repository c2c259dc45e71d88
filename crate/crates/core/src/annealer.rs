//! Simulated annealing over `G(n, k)` toward a zero-distance profile.
//!
//! A chain starts from a near-regular random graph. Each step proposes one
//! uniformly random swap (present edge out, absent edge in), evaluates the
//! profile change incrementally, and accepts when the score does not grow,
//! or with probability `exp(-Δ/T)` otherwise. The temperature at step `j`
//! is `t0 · alpha^j`. Chains are restarted from fresh graphs with seeds
//! derived from one master seed, and may run on several threads; the result
//! is the same for any thread count.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::admissibility::{target_profile, TargetProfile};
use crate::census::{apply_swap_with_delta, profile3, Profile3, SwapDelta};
use crate::error::{Error, Result};
use crate::graph::{emit_graph6, parse_graph6, Edge, EdgeSwap, LabeledGraph};

/// Temperature the default cooling schedule reaches at the last step.
pub const DEFAULT_FINAL_TEMPERATURE: f64 = 1e-3;
/// RNG stream used for proposals; stream 0 seeds the initial graph.
const STEP_STREAM: u64 = 1;

/// Search hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub t0: f64,
    /// Cooling factor; `None` picks the factor that takes `t0` to
    /// [`DEFAULT_FINAL_TEMPERATURE`] over `steps`.
    pub alpha: Option<f64>,
    pub steps: u64,
    pub restarts: usize,
    pub seed: u64,
    pub score_weights: [u64; 5],
    /// Steps between full recounts of the maintained profile (0 disables).
    pub audit_interval: u64,
    /// Steps between progress records (0 disables).
    pub progress_interval: u64,
    /// Steps between chain snapshots (0 disables).
    pub checkpoint_interval: u64,
    /// Worker threads; 0 means available parallelism.
    pub threads: usize,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            t0: 1.0,
            alpha: None,
            steps: 2_000_000,
            restarts: 32,
            seed: 0,
            score_weights: [1; 5],
            audit_interval: 100_000,
            progress_interval: 100_000,
            checkpoint_interval: 0,
            threads: 0,
        }
    }
}

impl AnnealConfig {
    pub fn effective_alpha(&self) -> f64 {
        self.alpha
            .unwrap_or_else(|| (DEFAULT_FINAL_TEMPERATURE / self.t0).powf(1.0 / self.steps.max(1) as f64))
    }

    pub fn temperature(&self, step: u64) -> f64 {
        self.t0 * self.effective_alpha().powf(step as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::Config(format!("t0 must be positive, got {}", self.t0)));
        }
        let alpha = self.effective_alpha();
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be positive".into()));
        }
        if self.score_weights.contains(&0) {
            return Err(Error::Config("score weights must be positive".into()));
        }
        Ok(())
    }

    fn worker_count(&self) -> usize {
        let t = if self.threads == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.threads
        };
        t.clamp(1, self.restarts)
    }
}

/// Weighted ℓ¹ distance between a profile and the target.
pub fn score(profile: &Profile3, target: &TargetProfile, weights: &[u64; 5]) -> u128 {
    profile
        .as_array()
        .iter()
        .zip(target.profile3.as_array())
        .zip(weights)
        .map(|((&x, t), &w)| x.abs_diff(t) as u128 * w as u128)
        .sum()
}

/// Seed of chain `restart`, derived from the master seed by SplitMix64.
pub fn chain_seed(master: u64, restart: usize) -> u64 {
    let mut z = master ^ (restart as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One annealing chain.
#[derive(Clone, Debug)]
pub struct SearchState {
    pub graph: LabeledGraph,
    pub profile: Profile3,
    pub score: u128,
    pub step: u64,
    pub best_graph: LabeledGraph,
    pub best_score: u128,
    pub best_step: u64,
    rng: ChaCha8Rng,
    seed: u64,
}

/// What happened on one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub swap: EdgeSwap,
    pub delta: SwapDelta,
    pub accepted: bool,
    pub score: u128,
}

impl SearchState {
    /// Fresh chain from a near-regular random graph.
    pub fn new(n: usize, k: usize, seed: u64, target: &TargetProfile, weights: &[u64; 5]) -> Result<Self> {
        let graph = LabeledGraph::near_regular_random(n, k, seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(STEP_STREAM);
        Ok(SearchState::from_parts(graph, 0, rng, seed, target, weights))
    }

    fn from_parts(
        graph: LabeledGraph,
        step: u64,
        rng: ChaCha8Rng,
        seed: u64,
        target: &TargetProfile,
        weights: &[u64; 5],
    ) -> Self {
        let profile = profile3(&graph);
        let score = score(&profile, target, weights);
        SearchState {
            best_graph: graph.clone(),
            best_score: score,
            best_step: step,
            graph,
            profile,
            score,
            step,
            rng,
            seed,
        }
    }

    pub fn temperature(&self, config: &AnnealConfig) -> f64 {
        config.temperature(self.step)
    }

    fn propose(&mut self) -> EdgeSwap {
        let g = &self.graph;
        let remove = g.edges()[self.rng.gen_range(0..g.k())];
        loop {
            let u = self.rng.gen_range(0..g.n());
            let v = self.rng.gen_range(0..g.n());
            if u != v && !g.has_edge(u, v) {
                return EdgeSwap::new(remove, Edge::new(u, v));
            }
        }
    }

    /// Recounts the profile from scratch and compares it with the
    /// maintained one.
    pub fn audit(&self) -> Result<()> {
        let fresh = profile3(&self.graph);
        if fresh != self.profile {
            return Err(Error::Internal(format!(
                "maintained profile {:?} != recount {fresh:?} at step {}",
                self.profile, self.step
            )));
        }
        Ok(())
    }
}

/// One proposal/acceptance step at temperature `t0 · alpha^step`.
pub fn anneal_step(state: &mut SearchState, config: &AnnealConfig, target: &TargetProfile) -> Result<StepOutcome> {
    let temperature = state.temperature(config);
    let swap = state.propose();
    let delta = apply_swap_with_delta(&mut state.graph, swap)?;
    let proposed = state.profile.apply(delta)?;
    let new_score = score(&proposed, target, &config.score_weights);
    let accepted = if new_score <= state.score {
        true
    } else {
        let rise = (new_score - state.score) as f64;
        state.rng.gen::<f64>() < (-rise / temperature).exp()
    };
    if accepted {
        state.profile = proposed;
        state.score = new_score;
    } else {
        state.graph.apply_swap_in_place(swap.inverse())?;
    }
    state.step += 1;
    if state.score < state.best_score {
        state.best_score = state.score;
        state.best_step = state.step;
        state.best_graph = state.graph.clone();
    }
    Ok(StepOutcome {
        swap,
        delta,
        accepted,
        score: state.score,
    })
}

/// Streamed once per `progress_interval` steps of each chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgressRecord {
    pub restart: usize,
    pub step: u64,
    pub score: u128,
    pub best_score: u128,
    pub temperature: f64,
}

/// Resumable state of a running chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSnapshot {
    pub restart: usize,
    pub seed: u64,
    pub step: u64,
    pub graph6: String,
    /// Edge list in internal order; proposals index into it.
    pub edge_order: Vec<Edge>,
    pub best_graph6: String,
    pub best_score: u128,
    pub best_step: u64,
    /// ChaCha word position of the proposal stream, decimal.
    pub rng_word_pos: String,
}

impl ChainSnapshot {
    fn capture(restart: usize, state: &SearchState) -> Self {
        ChainSnapshot {
            restart,
            seed: state.seed,
            step: state.step,
            graph6: emit_graph6(&state.graph),
            edge_order: state.graph.edges().to_vec(),
            best_graph6: emit_graph6(&state.best_graph),
            best_score: state.best_score,
            best_step: state.best_step,
            rng_word_pos: state.rng.get_word_pos().to_string(),
        }
    }

    fn restore(&self, target: &TargetProfile, weights: &[u64; 5]) -> Result<SearchState> {
        let bad = |m: &str| Error::Checkpoint(format!("chain {}: {m}", self.restart));
        let g6 = parse_graph6(&self.graph6)?;
        let graph = LabeledGraph::from_edges(g6.n(), &self.edge_order)?;
        if graph != g6 {
            return Err(bad("edge order disagrees with graph6"));
        }
        let pos: u128 = self.rng_word_pos.parse().map_err(|_| bad("bad rng position"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(STEP_STREAM);
        rng.set_word_pos(pos);
        let mut state = SearchState::from_parts(graph, self.step, rng, self.seed, target, weights);
        let best = parse_graph6(&self.best_graph6)?;
        let best_score = score(&profile3(&best), target, weights);
        if best_score != self.best_score {
            return Err(bad("best score does not match best graph"));
        }
        state.best_graph = best;
        state.best_score = best_score;
        state.best_step = self.best_step;
        Ok(state)
    }
}

/// Final outcome of one chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub restart: usize,
    pub seed: u64,
    pub best_graph6: String,
    pub best_score: u128,
    pub best_step: u64,
    pub steps_run: u64,
}

/// Everything needed to continue an interrupted search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    pub n: usize,
    pub k: usize,
    pub config: AnnealConfig,
    pub completed: Vec<ChainSummary>,
    pub active: Vec<ChainSnapshot>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: usize,
    pub k: usize,
    pub best_graph6: String,
    pub best_score: u128,
    pub restart: usize,
    pub step: u64,
    pub config: AnnealConfig,
    pub alpha: f64,
    pub target: TargetProfile,
    pub chains: Vec<ChainSummary>,
    pub wall_clock_secs: f64,
}

impl SearchResult {
    pub fn found(&self) -> bool {
        self.best_score == 0
    }

    pub fn best_graph(&self) -> Result<LabeledGraph> {
        parse_graph6(&self.best_graph6)
    }
}

/// Receives progress and checkpoints from [`run_search_with`]. Called from
/// the aggregating thread only.
pub trait SearchObserver {
    fn on_progress(&mut self, _record: &ProgressRecord) {}
    fn on_checkpoint(&mut self, _checkpoint: &SearchCheckpoint) {}
}

impl SearchObserver for () {}

enum ChainMsg {
    Progress(ProgressRecord),
    Snapshot(ChainSnapshot),
    Done(Result<ChainSummary>),
}

/// Runs chain `restart` to completion, or until a lower-indexed chain has
/// already hit zero.
fn run_chain(
    restart: usize,
    start: SearchState,
    config: &AnnealConfig,
    target: &TargetProfile,
    zero_at: &AtomicUsize,
    tx: &mpsc::Sender<ChainMsg>,
) -> Result<Option<ChainSummary>> {
    let mut state = start;
    while state.best_score > 0 && state.step < config.steps {
        if zero_at.load(Ordering::Relaxed) < restart {
            return Ok(None);
        }
        anneal_step(&mut state, config, target)?;
        let step = state.step;
        if config.audit_interval > 0 && step.is_multiple_of(config.audit_interval) {
            state.audit()?;
        }
        if config.progress_interval > 0 && step.is_multiple_of(config.progress_interval) {
            let _ = tx.send(ChainMsg::Progress(ProgressRecord {
                restart,
                step,
                score: state.score,
                best_score: state.best_score,
                temperature: state.temperature(config),
            }));
        }
        if config.checkpoint_interval > 0 && step.is_multiple_of(config.checkpoint_interval) {
            let _ = tx.send(ChainMsg::Snapshot(ChainSnapshot::capture(restart, &state)));
        }
    }
    state.audit()?;
    if state.best_score == 0 {
        zero_at.fetch_min(restart, Ordering::Relaxed);
    }
    Ok(Some(ChainSummary {
        restart,
        seed: state.seed,
        best_graph6: emit_graph6(&state.best_graph),
        best_score: state.best_score,
        best_step: state.best_step,
        steps_run: state.step,
    }))
}

/// Runs the search with default observation and no resume.
pub fn run_search(n: usize, k: usize, config: &AnnealConfig) -> Result<SearchResult> {
    run_search_with(n, k, config, None, &mut ())
}

/// Runs `config.restarts` chains and returns the lowest-indexed zero-score
/// chain, or the best chain overall (ties to the lowest index).
pub fn run_search_with(
    n: usize,
    k: usize,
    config: &AnnealConfig,
    resume: Option<&SearchCheckpoint>,
    observer: &mut dyn SearchObserver,
) -> Result<SearchResult> {
    config.validate()?;
    let target = target_profile(n, k)?;
    let started = Instant::now();

    let mut completed: BTreeMap<usize, ChainSummary> = BTreeMap::new();
    let mut snapshots: BTreeMap<usize, ChainSnapshot> = BTreeMap::new();
    if let Some(cp) = resume {
        let same_config = AnnealConfig {
            threads: config.threads,
            ..cp.config.clone()
        } == *config;
        if (cp.n, cp.k) != (n, k) || !same_config {
            return Err(Error::Checkpoint("parameters or configuration differ".into()));
        }
        completed.extend(cp.completed.iter().map(|c| (c.restart, c.clone())));
        snapshots.extend(cp.active.iter().map(|s| (s.restart, s.clone())));
    }

    let zero_at = AtomicUsize::new(
        completed
            .values()
            .filter(|c| c.best_score == 0)
            .map(|c| c.restart)
            .min()
            .unwrap_or(usize::MAX),
    );
    let pending: Vec<usize> = (0..config.restarts).filter(|r| !completed.contains_key(r)).collect();
    let starts: Vec<Option<ChainSnapshot>> = pending.iter().map(|r| snapshots.get(r).cloned()).collect();
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<ChainMsg>();

    let mut failure: Option<Error> = None;
    std::thread::scope(|scope| {
        for _ in 0..config.worker_count() {
            let tx = tx.clone();
            let (pending, starts, next, zero_at, target) = (&pending, &starts, &next, &zero_at, &target);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&restart) = pending.get(i) else { break };
                if zero_at.load(Ordering::Relaxed) < restart {
                    continue;
                }
                let start = match &starts[i] {
                    Some(snap) => snap.restore(target, &config.score_weights),
                    None => SearchState::new(n, k, chain_seed(config.seed, restart), target, &config.score_weights),
                };
                let outcome = start.and_then(|s| run_chain(restart, s, config, target, zero_at, &tx));
                match outcome {
                    Ok(Some(summary)) => {
                        let _ = tx.send(ChainMsg::Done(Ok(summary)));
                    }
                    Ok(None) => {}
                    Err(e) => {
                        let _ = tx.send(ChainMsg::Done(Err(e)));
                    }
                }
            });
        }
        drop(tx);

        for msg in rx {
            match msg {
                ChainMsg::Progress(p) => observer.on_progress(&p),
                ChainMsg::Snapshot(s) => {
                    snapshots.insert(s.restart, s);
                    observer.on_checkpoint(&SearchCheckpoint {
                        n,
                        k,
                        config: config.clone(),
                        completed: completed.values().cloned().collect(),
                        active: snapshots.values().cloned().collect(),
                    });
                }
                ChainMsg::Done(Ok(summary)) => {
                    snapshots.remove(&summary.restart);
                    completed.insert(summary.restart, summary);
                }
                ChainMsg::Done(Err(e)) => {
                    zero_at.store(0, Ordering::Relaxed);
                    failure.get_or_insert(e);
                }
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }

    let cutoff = zero_at.load(Ordering::Relaxed);
    let chains: Vec<ChainSummary> = completed.into_values().filter(|c| c.restart <= cutoff).collect();
    let best = chains
        .iter()
        .min_by_key(|c| (c.best_score, c.restart))
        .ok_or_else(|| Error::Internal("no chain completed".into()))?
        .clone();
    Ok(SearchResult {
        n,
        k,
        best_graph6: best.best_graph6.clone(),
        best_score: best.best_score,
        restart: best.restart,
        step: best.best_step,
        config: config.clone(),
        alpha: config.effective_alpha(),
        target,
        chains,
        wall_clock_secs: started.elapsed().as_secs_f64(),
    })
}
