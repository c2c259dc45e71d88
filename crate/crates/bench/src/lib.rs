//! Fixtures shared by the benchmarks.

use edgebal_core::{Edge, EdgeSwap, LabeledGraph};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Parameter pairs the benchmarks sweep, smallest first.
pub const SIZES: [(usize, usize); 4] = [(13, 21), (21, 66), (34, 260), (77, 1378)];

pub fn fixture(n: usize, k: usize) -> LabeledGraph {
    LabeledGraph::near_regular_random(n, k, 0x5EED ^ ((n as u64) << 20) ^ k as u64).expect("fixture graph")
}

/// A fixed sequence of valid swaps, each applicable after the previous.
pub fn swap_walk(g: &LabeledGraph, len: usize, seed: u64) -> Vec<EdgeSwap> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut g = g.clone();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let remove = g.edges()[rng.gen_range(0..g.k())];
        let add = loop {
            let (u, v) = (rng.gen_range(0..g.n()), rng.gen_range(0..g.n()));
            if u != v && !g.has_edge(u, v) {
                break Edge::new(u, v);
            }
        };
        let swap = EdgeSwap::new(remove, add);
        g.apply_swap_in_place(swap).expect("valid swap");
        out.push(swap);
    }
    out
}
