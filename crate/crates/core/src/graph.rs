//! Labeled graphs on `{0..n-1}` with a fixed edge count.
//!
//! A [`LabeledGraph`] keeps three views of the same edge set in lockstep:
//! packed adjacency rows (so common-neighbour counts are `AND` + popcount),
//! an ordered edge list (so a uniformly random present edge is one index
//! draw), and a degree array.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NO_EDGE: u32 = u32::MAX;
const NEAR_REGULAR_ATTEMPTS: usize = 1000;

/// An unordered vertex pair, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", try_from = "[u32; 2]")]
pub struct Edge(u32, u32);

impl Edge {
    /// Normalizes the endpoint order. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop ({a},{b})");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge(u as u32, v as u32)
    }

    #[inline]
    pub fn u(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn v(self) -> usize {
        self.1 as usize
    }

    pub fn touches(self, w: usize) -> bool {
        self.u() == w || self.v() == w
    }
}

impl From<Edge> for [u32; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl TryFrom<[u32; 2]> for Edge {
    type Error = String;

    fn try_from([a, b]: [u32; 2]) -> std::result::Result<Self, Self::Error> {
        if a == b {
            return Err(format!("self-loop ({a},{b})"));
        }
        Ok(Edge::new(a as usize, b as usize))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Replace one present edge by one absent edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSwap {
    pub remove: Edge,
    pub add: Edge,
}

impl EdgeSwap {
    pub fn new(remove: Edge, add: Edge) -> Self {
        EdgeSwap { remove, add }
    }

    /// The swap that undoes this one.
    pub fn inverse(self) -> Self {
        EdgeSwap {
            remove: self.add,
            add: self.remove,
        }
    }
}

/// A simple graph on vertex set `{0..n-1}`.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    edges: Vec<Edge>,
    degrees: Vec<u32>,
    /// Position of each present pair in `edges`, indexed by [`pair_index`].
    edge_pos: Vec<u32>,
}

impl PartialEq for LabeledGraph {
    /// Two graphs are equal when they have the same vertex count and edge
    /// set; the order of the internal edge list is irrelevant.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for LabeledGraph {}

#[inline]
fn pair_index(u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

/// `C(n, 2)`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl LabeledGraph {
    /// Empty graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        LabeledGraph {
            n,
            words,
            adj: vec![0; n * words],
            edges: Vec::new(),
            degrees: vec![0; n],
            edge_pos: vec![NO_EDGE; pair_count(n)],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = LabeledGraph::empty(n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::EndpointOutOfRange { u: a, v: b, n });
            }
            if a == b {
                return Err(Error::SelfLoop { v: a });
            }
            let e = Edge::new(a, b);
            if g.has_edge(a, b) {
                return Err(Error::DuplicateEdge { u: e.u(), v: e.v() });
            }
            g.insert(e);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self> {
        let pairs: Vec<_> = edges.iter().map(|e| (e.u(), e.v())).collect();
        LabeledGraph::new(n, &pairs)
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut g = LabeledGraph::empty(n);
        for v in 1..n {
            for u in 0..v {
                g.insert(Edge::new(u, v));
            }
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.edges.len()
    }

    /// `N = C(n, 2)`, the number of edges of `K_n`.
    pub fn pair_count(&self) -> usize {
        pair_count(self.n)
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v] as usize
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// `|N(u) ∩ N(v)|`.
    #[inline]
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Sum of the degrees of the neighbours of `v`.
    pub fn neighbor_degree_sum(&self, v: usize) -> usize {
        self.neighbors(v).map(|w| self.degree(w)).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn set_bit(&mut self, u: usize, v: usize, on: bool) {
        let idx = u * self.words + v / 64;
        let mask = 1u64 << (v % 64);
        if on {
            self.adj[idx] |= mask;
        } else {
            self.adj[idx] &= !mask;
        }
    }

    fn insert(&mut self, e: Edge) {
        let (u, v) = (e.u(), e.v());
        self.set_bit(u, v, true);
        self.set_bit(v, u, true);
        self.degrees[u] += 1;
        self.degrees[v] += 1;
        self.edge_pos[pair_index(u, v)] = self.edges.len() as u32;
        self.edges.push(e);
    }

    /// Applies `swap` in place. The added edge takes the removed edge's slot
    /// in the edge list, so applying the inverse swap restores the exact
    /// original list order.
    pub fn apply_swap_in_place(&mut self, swap: EdgeSwap) -> Result<()> {
        let EdgeSwap { remove, add } = swap;
        for e in [remove, add] {
            if e.v() >= self.n {
                return Err(Error::EndpointOutOfRange {
                    u: e.u(),
                    v: e.v(),
                    n: self.n,
                });
            }
        }
        if !self.has_edge(remove.u(), remove.v()) {
            return Err(Error::InvalidSwap(format!("{remove} is not an edge")));
        }
        if self.has_edge(add.u(), add.v()) {
            return Err(Error::InvalidSwap(format!("{add} is already an edge")));
        }
        let slot = self.edge_pos[pair_index(remove.u(), remove.v())];
        self.edge_pos[pair_index(remove.u(), remove.v())] = NO_EDGE;
        self.set_bit(remove.u(), remove.v(), false);
        self.set_bit(remove.v(), remove.u(), false);
        self.degrees[remove.u()] -= 1;
        self.degrees[remove.v()] -= 1;

        self.set_bit(add.u(), add.v(), true);
        self.set_bit(add.v(), add.u(), true);
        self.degrees[add.u()] += 1;
        self.degrees[add.v()] += 1;
        self.edge_pos[pair_index(add.u(), add.v())] = slot;
        self.edges[slot as usize] = add;
        Ok(())
    }

    /// Returns a new graph with `swap` applied.
    pub fn apply_swap(&self, swap: EdgeSwap) -> Result<Self> {
        let mut g = self.clone();
        g.apply_swap_in_place(swap)?;
        Ok(g)
    }

    /// Complement graph `K_n - G`.
    pub fn complement(&self) -> Self {
        let mut g = LabeledGraph::empty(self.n);
        for v in 1..self.n {
            for u in 0..v {
                if !self.has_edge(u, v) {
                    g.insert(Edge::new(u, v));
                }
            }
        }
        g
    }

    /// Edges sorted lexicographically, independent of the internal order.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    /// Checks that adjacency rows, edge list, degree array and position index
    /// all describe the same edge set.
    pub fn check_consistency(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(msg));
        let mut popcount = 0usize;
        for v in 0..self.n {
            if self.has_edge(v, v) {
                return fail(format!("loop bit set at {v}"));
            }
            let row_pop: usize = self.row(v).iter().map(|w| w.count_ones() as usize).sum();
            if row_pop != self.degree(v) {
                return fail(format!("degree of {v} is {} but row has {row_pop}", self.degree(v)));
            }
            popcount += row_pop;
            for u in 0..self.n {
                if self.has_edge(u, v) != self.has_edge(v, u) {
                    return fail(format!("asymmetric adjacency at ({u},{v})"));
                }
            }
        }
        if popcount != 2 * self.k() {
            return fail(format!("row popcount {popcount} != 2k = {}", 2 * self.k()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if !self.has_edge(e.u(), e.v()) {
                return fail(format!("listed edge {e} missing from rows"));
            }
            if self.edge_pos[pair_index(e.u(), e.v())] as usize != i {
                return fail(format!("position index stale for {e}"));
            }
        }
        let present = self.edge_pos.iter().filter(|&&p| p != NO_EDGE).count();
        if present != self.k() {
            return fail(format!("{present} indexed pairs for {} edges", self.k()));
        }
        Ok(())
    }

    /// Random graph with `k` edges whose degrees are all `⌊2k/n⌋` or
    /// `⌈2k/n⌉`, exactly `2k mod n` of them the larger value.
    ///
    /// Vertex slots are shuffled and paired greedily; a dead end (a vertex
    /// whose remaining slots can only close loops or repeat edges) triggers
    /// a reshuffle. Above half density the complement is built instead.
    pub fn near_regular_random(n: usize, k: usize, seed: u64) -> Result<Self> {
        if k > pair_count(n) {
            return Err(Error::TooManyEdges { n, k });
        }
        if 2 * k > pair_count(n) {
            return Self::near_regular_random(n, pair_count(n) - k, seed).map(|g| g.complement());
        }
        if k == 0 {
            return Ok(LabeledGraph::empty(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let low = 2 * k / n;
        let extra = 2 * k % n;

        for _ in 0..NEAR_REGULAR_ATTEMPTS {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut want = vec![low; n];
            for &v in &order[..extra] {
                want[v] += 1;
            }
            let mut slots: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, want[v])).collect();
            slots.shuffle(&mut rng);
            if let Some(g) = greedy_pairing(n, &mut slots) {
                return Ok(g);
            }
        }
        Err(Error::NearRegularFailed {
            n,
            k,
            attempts: NEAR_REGULAR_ATTEMPTS,
        })
    }

    /// Uniformly random graph with `k` edges (used by tests and benches).
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        if k > pair_count(n) {
            return Err(Error::TooManyEdges { n, k });
        }
        let mut pairs: Vec<(usize, usize)> = (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        let (chosen, _) = pairs.partial_shuffle(rng, k);
        LabeledGraph::new(n, chosen)
    }
}

/// Pairs slots greedily: the last slot is matched with the nearest remaining
/// slot (scanning from the back) that forms a new non-loop edge.
fn greedy_pairing(n: usize, slots: &mut Vec<usize>) -> Option<LabeledGraph> {
    let mut g = LabeledGraph::empty(n);
    while let Some(u) = slots.pop() {
        let j = slots.iter().rposition(|&v| v != u && !g.has_edge(u, v))?;
        let v = slots.remove(j);
        g.insert(Edge::new(u, v));
    }
    Some(g)
}

// graph6 -------------------------------------------------------------------

const G6_OFFSET: u8 = 63;
const G6_HEADER: &str = ">>graph6<<";

fn push_size(out: &mut String, n: usize) {
    if n <= 62 {
        out.push((n as u8 + G6_OFFSET) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + G6_OFFSET) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + G6_OFFSET) as char);
        }
    }
}

/// Encodes `g` in graph6: size header, then the upper triangle of the
/// adjacency matrix column by column, six bits per printable byte, most
/// significant bit first.
pub fn emit_graph6(g: &LabeledGraph) -> String {
    let n = g.n();
    let mut out = String::with_capacity(8 + pair_count(n).div_ceil(6));
    push_size(&mut out, n);
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + G6_OFFSET) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + G6_OFFSET) as char);
    }
    out
}

/// Decodes one graph6 string. An optional `>>graph6<<` header and
/// surrounding whitespace are accepted.
pub fn parse_graph6(text: &str) -> Result<LabeledGraph> {
    let s = text.trim();
    let s = s.strip_prefix(G6_HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    let bad = |msg: String| Error::Graph6(msg);
    if let Some(pos) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(bad(format!(
            "byte {:#04x} at offset {pos} is outside the graph6 range",
            bytes[pos]
        )));
    }
    let sixes = |chunk: &[u8]| {
        chunk
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - G6_OFFSET) as usize)
    };
    let (n, body) = match bytes {
        [] => return Err(bad("empty input".into())),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(bad("truncated 8-byte size header".into()));
            }
            (sixes(&rest[..6]), &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(bad("truncated 4-byte size header".into()));
            }
            (sixes(&rest[..3]), &rest[3..])
        }
        [first, rest @ ..] => ((first - G6_OFFSET) as usize, rest),
    };
    let bits = pair_count(n);
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(bad(format!(
            "n = {n} needs {expected} data bytes, found {}",
            body.len()
        )));
    }
    let mut g = LabeledGraph::empty(n);
    let mut idx = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = body[idx / 6] - G6_OFFSET;
            if byte >> (5 - idx % 6) & 1 == 1 {
                g.insert(Edge::new(u, v));
            }
            idx += 1;
        }
    }
    if !bits.is_multiple_of(6) {
        let pad = body[expected - 1] - G6_OFFSET;
        if pad & ((1u8 << (6 - bits % 6)) - 1) != 0 {
            return Err(bad("nonzero padding bits".into()));
        }
    }
    Ok(g)
}

/// Parses the edge-list ingest format: one `u v` pair per line; blank lines
/// and `#` comments are skipped. Without an explicit `n` the vertex count is
/// one more than the largest endpoint.
pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<LabeledGraph> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => pairs.push((u, v)),
            _ => {
                return Err(Error::EdgeList(format!(
                    "line {}: expected `u v`, got {line:?}",
                    lineno + 1
                )))
            }
        }
    }
    let n = n.unwrap_or_else(|| pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    LabeledGraph::new(n, &pairs)
}

/// Renders `g` in the edge-list format, one sorted pair per line.
pub fn emit_edge_list(g: &LabeledGraph) -> String {
    g.sorted_edges()
        .iter()
        .map(|e| format!("{} {}\n", e.u(), e.v()))
        .collect()
}
