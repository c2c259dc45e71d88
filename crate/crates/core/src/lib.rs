//! Search, census and certification of 3-edge-balanced graphs.
//!
//! A graph `G` on `n` vertices with `k` edges is *t-edge-balanced* when every
//! `t`-edge graph on the same vertex set lies in the same number `λ` of
//! copies of `G` inside `K_n`. For `t = 3` this pins the counts of the five
//! 3-edge subgraph classes of `G` to a target fixed by `(n, k)`, which makes
//! finding such a graph an integer optimization problem.
//!
//! * [`graph`]: labeled graphs, swaps, near-regular starts, graph6.
//! * [`census`]: exact 2/3/4-edge subgraph profiles and swap deltas.
//! * [`admissibility`]: divisibility conditions and target profiles.
//! * [`annealer`]: the simulated-annealing search.
//! * [`automorphism`]: `|Aut(G)|`, template orders, design indices.
//! * [`verifier`]: independent certification and side checks.

pub mod admissibility;
pub mod annealer;
pub mod automorphism;
pub mod census;
pub mod classes;
pub mod error;
pub mod graph;
pub mod verifier;

pub use admissibility::{check_c1, check_c2, is_admissible, scan_admissible, target_profile, TargetProfile};
pub use annealer::{anneal_step, run_search, run_search_with, score, AnnealConfig, SearchResult, SearchState};
pub use automorphism::{aut_order, index_lambda, lambda_for_class, template_aut_order, AutResult, IndexReport};
pub use census::{
    profile2, profile3, profile3_bruteforce, profile3_delta, profile4_bruteforce, Profile2, Profile3, Profile4,
    SwapDelta,
};
pub use classes::{classify3, classify4, GraphClass};
pub use error::{Error, Result};
pub use graph::{emit_graph6, parse_graph6, Edge, EdgeSwap, LabeledGraph};
pub use verifier::{
    check_2edge_balance, exhaustive_small_n, four_edge_imbalance, nonexistence_identity, verify_certificate,
    Certificate, VerifyOptions,
};
