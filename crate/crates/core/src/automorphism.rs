//! Automorphism-group orders and design indices.
//!
//! The order is computed through a stabilizer chain: pick a base vertex in
//! a non-trivial cell of the refined colouring, count the vertices of that
//! cell it can be mapped to by a colour-preserving automorphism (its orbit),
//! individualize it and repeat. The product of the orbit lengths is `|Aut|`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::classes::GraphClass;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("bad decimal"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutResult {
    #[serde(with = "decimal")]
    pub order: BigUint,
    #[serde(with = "decimal")]
    pub support_order: BigUint,
    pub isolated_count: usize,
}

/// The design index `λ = q · base!`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    #[serde(with = "decimal")]
    pub lambda: BigUint,
    /// `q` in lowest terms, rendered `num` or `num/den`.
    pub factor: String,
    pub base: usize,
}

/// Adjacency of a small (support) graph with per-vertex bit rows.
struct Support {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    nbrs: Vec<Vec<usize>>,
}

impl Support {
    fn of(g: &LabeledGraph) -> (Support, usize) {
        let verts: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let n = verts.len();
        let words = n.div_ceil(64).max(1);
        let mut s = Support {
            n,
            words,
            rows: vec![0; n * words],
            nbrs: vec![Vec::new(); n],
        };
        for e in g.edges() {
            let (a, b) = (local[e.u()], local[e.v()]);
            s.rows[a * words + b / 64] |= 1 << (b % 64);
            s.rows[b * words + a / 64] |= 1 << (a % 64);
            s.nbrs[a].push(b);
            s.nbrs[b].push(a);
        }
        (s, g.n() - n)
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.rows[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }
}

type Coloring = Vec<u32>;

/// Colour refinement to the coarsest equitable colouring finer than `c`.
/// New colours are ranks of `(old colour, sorted neighbour colours)`, so the
/// result commutes with vertex relabelling.
fn refine(s: &Support, mut c: Coloring) -> Coloring {
    let mut classes = distinct(&c);
    loop {
        let mut sigs: Vec<(Vec<u32>, usize)> = (0..s.n)
            .map(|v| {
                let mut sig = Vec::with_capacity(s.nbrs[v].len() + 1);
                sig.push(c[v]);
                let start = sig.len();
                sig.extend(s.nbrs[v].iter().map(|&w| c[w]));
                sig[start..].sort_unstable();
                (sig, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut next = vec![0u32; s.n];
        let mut rank = 0u32;
        for i in 0..sigs.len() {
            if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                rank += 1;
            }
            next[sigs[i].1] = rank;
        }
        c = next;
        let now = distinct(&c);
        if now == classes {
            return c;
        }
        classes = now;
    }
}

fn distinct(c: &Coloring) -> usize {
    c.iter().copied().max().map_or(0, |m| m as usize + 1)
}

fn individualize(s: &Support, c: &Coloring, v: usize) -> Coloring {
    let mut out = c.clone();
    out[v] = distinct(c) as u32;
    refine(s, out)
}

fn histogram(c: &Coloring) -> Vec<u32> {
    let mut h = vec![0u32; distinct(c)];
    for &x in c {
        h[x as usize] += 1;
    }
    h
}

/// First vertex of the smallest non-singleton colour, if any.
fn target_cell(c: &Coloring) -> Option<(u32, usize)> {
    let h = histogram(c);
    let color = h.iter().position(|&x| x > 1)? as u32;
    let v = c.iter().position(|&x| x == color).unwrap();
    Some((color, v))
}

struct Search<'a> {
    s: &'a Support,
    /// Colouring every automorphism must preserve (the base points so far).
    base: &'a Coloring,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Is there an automorphism of the base-coloured graph carrying the
    /// colouring `left` onto `right`?
    fn exists(&mut self, left: &Coloring, right: &Coloring) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudget(self.budget));
        }
        if histogram(left) != histogram(right) {
            return Ok(false);
        }
        let Some((color, x)) = target_cell(left) else {
            return Ok(self.is_automorphism(left, right));
        };
        for y in (0..self.s.n).filter(|&y| right[y] == color) {
            let l = individualize(self.s, left, x);
            let r = individualize(self.s, right, y);
            if self.exists(&l, &r)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn is_automorphism(&self, left: &Coloring, right: &Coloring) -> bool {
        let mut image = vec![0usize; self.s.n];
        let mut by_color = vec![usize::MAX; self.s.n];
        for (v, &c) in right.iter().enumerate() {
            by_color[c as usize] = v;
        }
        for (v, &c) in left.iter().enumerate() {
            image[v] = by_color[c as usize];
        }
        (0..self.s.n).all(|v| self.base[v] == self.base[image[v]])
            && (0..self.s.n).all(|v| {
                self.s.nbrs[v].len() == self.s.nbrs[image[v]].len()
                    && self.s.nbrs[v].iter().all(|&w| self.s.adjacent(image[v], image[w]))
            })
    }
}

fn support_aut_order(s: &Support, budget: u64) -> Result<BigUint> {
    let mut order = BigUint::one();
    let mut current = refine(s, vec![0; s.n]);
    let mut nodes = 0u64;
    while let Some((color, v)) = target_cell(&current) {
        let left = individualize(s, &current, v);
        let mut orbit = 1u64;
        for w in (0..s.n).filter(|&w| w != v && current[w] == color) {
            let right = individualize(s, &current, w);
            let mut search = Search {
                s,
                base: &current,
                nodes,
                budget,
            };
            if search.exists(&left, &right)? {
                orbit += 1;
            }
            nodes = search.nodes;
        }
        order *= BigUint::from(orbit);
        current = left;
    }
    Ok(order)
}

/// `|Aut(G)|` with the default search budget.
pub fn aut_order(g: &LabeledGraph) -> Result<AutResult> {
    aut_order_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn aut_order_with_budget(g: &LabeledGraph, budget: u64) -> Result<AutResult> {
    let (s, isolated_count) = Support::of(g);
    let support_order = support_aut_order(&s, budget)?;
    Ok(AutResult {
        order: &support_order * factorial(isolated_count),
        support_order,
        isolated_count,
    })
}

/// Closed-form `|Aut(H)|` for a template class embedded in `n` vertices,
/// `support_aut_order · (n - vertex_count)!`.
pub fn template_aut_order(class: GraphClass, n: usize) -> Result<BigUint> {
    if n < class.vertex_count() {
        return Err(Error::ClassDoesNotEmbed { class: class.name(), n });
    }
    Ok(BigUint::from(class.support_aut_order()) * factorial(n - class.vertex_count()))
}

/// `λ_{G:H} = n_{G:H} · |Aut(H)| / |Aut(G)|` as an exact rational.
pub fn lambda_for_class(count: u64, aut_h: &BigUint, aut_g: &BigUint) -> BigRational {
    assert!(!aut_g.is_zero(), "automorphism group order is positive");
    BigRational::new((BigUint::from(count) * aut_h).into(), aut_g.clone().into())
}

/// The index of a 3-edge-balanced graph, taken through the triangle class:
/// `λ = c · 6(n-3)! / |Aut(G)|`.
pub fn index_lambda(n: usize, triangles: u64, aut_g: &AutResult) -> Result<IndexReport> {
    let aut_k3 = template_aut_order(GraphClass::K3, n)?;
    let lambda = lambda_for_class(triangles, &aut_k3, &aut_g.order);
    if !lambda.is_integer() || lambda.is_zero() {
        return Err(Error::NonIntegralIndex(format!(
            "{triangles}·6·{}!/{} = {lambda}",
            n - 3,
            aut_g.order
        )));
    }
    let q = BigRational::new((BigUint::from(6 * triangles)).into(), aut_g.order.clone().into());
    Ok(IndexReport {
        lambda: lambda.to_integer().magnitude().clone(),
        factor: q.to_string(),
        base: n - 3,
    })
}
