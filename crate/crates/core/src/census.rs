//! Exact subgraph-count profiles.
//!
//! Three routes are kept side by side:
//!
//! * closed forms from degrees and common-neighbour counts ([`profile3`]),
//! * exhaustive enumeration of edge subsets ([`profile3_bruteforce`],
//!   [`profile4_bruteforce`]), which is the certification path,
//! * per-swap deltas from local quantities around the four endpoints
//!   ([`profile3_delta`]), used by the annealer.

use std::ops::{Add, AddAssign, Neg};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{classify4, GraphClass};
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSwap, LabeledGraph};

pub const DEFAULT_TRIPLE_BUDGET: u128 = 1_000_000_000;
pub const DEFAULT_QUAD_BUDGET: u128 = 100_000_000;

pub(crate) fn choose(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Counts of `P3` (`a`) and `2K2` (`b`) subgraphs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile2 {
    #[serde(rename = "P3")]
    pub a: u64,
    #[serde(rename = "2K2")]
    pub b: u64,
}

impl Profile2 {
    pub fn total(&self) -> u128 {
        self.a as u128 + self.b as u128
    }
}

/// Counts of the five 3-edge classes: `K3`, `P4`, `K1,3`, `P3+K2`, `3K2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Profile3 {
    #[serde(rename = "K3")]
    pub c: u64,
    #[serde(rename = "P4")]
    pub p: u64,
    #[serde(rename = "K1,3")]
    pub s: u64,
    #[serde(rename = "P3+K2")]
    pub d: u64,
    #[serde(rename = "3K2")]
    pub m: u64,
}

impl Profile3 {
    pub fn new(c: u64, p: u64, s: u64, d: u64, m: u64) -> Self {
        Profile3 { c, p, s, d, m }
    }

    pub fn as_array(&self) -> [u64; 5] {
        [self.c, self.p, self.s, self.d, self.m]
    }

    pub fn from_array([c, p, s, d, m]: [u64; 5]) -> Self {
        Profile3 { c, p, s, d, m }
    }

    pub fn get(&self, class: GraphClass) -> Option<u64> {
        GraphClass::THREE_EDGE
            .iter()
            .position(|&c| c == class)
            .map(|i| self.as_array()[i])
    }

    pub fn total(&self) -> u128 {
        self.as_array().iter().map(|&x| x as u128).sum()
    }

    /// Adds a delta, failing if any component would go negative.
    pub fn apply(&self, delta: SwapDelta) -> Result<Profile3> {
        let mut out = [0u64; 5];
        for (i, (x, dx)) in self.as_array().into_iter().zip(delta.as_array()).enumerate() {
            let v = x as i64 + dx;
            if v < 0 {
                return Err(Error::Internal(format!("profile component {i} went negative")));
            }
            out[i] = v as u64;
        }
        Ok(Profile3::from_array(out))
    }
}

impl Add for Profile3 {
    type Output = Profile3;
    fn add(self, o: Profile3) -> Profile3 {
        Profile3::new(self.c + o.c, self.p + o.p, self.s + o.s, self.d + o.d, self.m + o.m)
    }
}

/// Counts of the eleven 4-edge classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile4 {
    /// `K3 + e`.
    pub paw: u64,
    #[serde(rename = "K3+K2")]
    pub k3_k2: u64,
    #[serde(rename = "C4")]
    pub c4: u64,
    #[serde(rename = "P5")]
    pub p5: u64,
    pub fork: u64,
    #[serde(rename = "K1,4")]
    pub star: u64,
    #[serde(rename = "P4+K2")]
    pub p4_k2: u64,
    #[serde(rename = "K1,3+K2")]
    pub claw_k2: u64,
    #[serde(rename = "2P3")]
    pub two_p3: u64,
    /// `y`.
    #[serde(rename = "P3+2K2")]
    pub p3_two_k2: u64,
    /// `f`.
    #[serde(rename = "4K2")]
    pub four_k2: u64,
}

impl Profile4 {
    pub fn as_array(&self) -> [u64; 11] {
        [
            self.paw,
            self.k3_k2,
            self.c4,
            self.p5,
            self.fork,
            self.star,
            self.p4_k2,
            self.claw_k2,
            self.two_p3,
            self.p3_two_k2,
            self.four_k2,
        ]
    }

    pub fn get(&self, class: GraphClass) -> Option<u64> {
        GraphClass::FOUR_EDGE
            .iter()
            .position(|&c| c == class)
            .map(|i| self.as_array()[i])
    }

    /// `(class, count)` pairs in the documented order.
    pub fn entries(&self) -> impl Iterator<Item = (GraphClass, u64)> {
        GraphClass::FOUR_EDGE.into_iter().zip(self.as_array())
    }

    pub fn total(&self) -> u128 {
        self.as_array().iter().map(|&x| x as u128).sum()
    }

    fn slot(&mut self, class: GraphClass) -> &mut u64 {
        match class {
            GraphClass::Paw => &mut self.paw,
            GraphClass::K3K2 => &mut self.k3_k2,
            GraphClass::C4 => &mut self.c4,
            GraphClass::P5 => &mut self.p5,
            GraphClass::Fork => &mut self.fork,
            GraphClass::Star4 => &mut self.star,
            GraphClass::P4K2 => &mut self.p4_k2,
            GraphClass::ClawK2 => &mut self.claw_k2,
            GraphClass::TwoP3 => &mut self.two_p3,
            GraphClass::P3TwoK2 => &mut self.p3_two_k2,
            GraphClass::FourK2 => &mut self.four_k2,
            other => unreachable!("{other} is not a 4-edge class"),
        }
    }

    fn merge(mut self, other: Profile4) -> Profile4 {
        for (class, count) in other.entries() {
            *self.slot(class) += count;
        }
        self
    }
}

/// Signed change of a [`Profile3`] under one swap.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapDelta {
    pub dc: i64,
    pub dp: i64,
    pub ds: i64,
    pub dd: i64,
    pub dm: i64,
}

impl SwapDelta {
    pub fn as_array(&self) -> [i64; 5] {
        [self.dc, self.dp, self.ds, self.dd, self.dm]
    }

    pub fn from_array([dc, dp, ds, dd, dm]: [i64; 5]) -> Self {
        SwapDelta { dc, dp, ds, dd, dm }
    }

    pub fn between(before: &Profile3, after: &Profile3) -> Self {
        let b = before.as_array();
        let a = after.as_array();
        SwapDelta::from_array(std::array::from_fn(|i| a[i] as i64 - b[i] as i64))
    }

    pub fn is_zero(&self) -> bool {
        self.as_array() == [0; 5]
    }
}

impl Add for SwapDelta {
    type Output = SwapDelta;
    fn add(self, o: SwapDelta) -> SwapDelta {
        let (a, b) = (self.as_array(), o.as_array());
        SwapDelta::from_array(std::array::from_fn(|i| a[i] + b[i]))
    }
}

impl AddAssign for SwapDelta {
    fn add_assign(&mut self, o: SwapDelta) {
        *self = *self + o;
    }
}

impl Neg for SwapDelta {
    type Output = SwapDelta;
    fn neg(self) -> SwapDelta {
        SwapDelta::from_array(self.as_array().map(|x| -x))
    }
}

fn c2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

fn c3(x: u64) -> u64 {
    if x < 3 {
        0
    } else {
        x * (x - 1) * (x - 2) / 6
    }
}

/// `a = Σ_v C(deg v, 2)`, `b = C(k, 2) - a`.
pub fn profile2(g: &LabeledGraph) -> Profile2 {
    let a: u64 = g.degrees().iter().map(|&d| c2(d as u64)).sum();
    Profile2 {
        a,
        b: c2(g.k() as u64) - a,
    }
}

/// Closed-form 3-edge profile.
///
/// `c` and `p` come from edge-local sums, `s` from degrees, and `d`, `m`
/// from the incidence identities
/// `a(k-2) = 3c + 2p + 3s + d` and `b(k-2) = p + 2d + 3m`.
pub fn profile3(g: &LabeledGraph) -> Profile3 {
    let k = g.k() as i128;
    let Profile2 { a, b } = profile2(g);
    let (a, b) = (a as i128, b as i128);

    let mut tri3 = 0i128;
    let mut mid = 0i128;
    for e in g.edges() {
        tri3 += g.common_neighbors(e.u(), e.v()) as i128;
        mid += (g.degree(e.u()) as i128 - 1) * (g.degree(e.v()) as i128 - 1);
    }
    assert!(tri3 % 3 == 0, "triangle incidence sum {tri3} not divisible by 3");
    let c = tri3 / 3;
    let s: i128 = g.degrees().iter().map(|&d| c3(d as u64) as i128).sum();
    let p = mid - 3 * c;
    if k < 3 {
        return Profile3::default();
    }
    let d = a * (k - 2) - 3 * c - 2 * p - 3 * s;
    let m3 = b * (k - 2) - p - 2 * d;
    assert!(m3 % 3 == 0, "3K2 identity residue {m3} not divisible by 3");
    let m = m3 / 3;
    let out = [c, p, s, d, m];
    assert!(out.iter().all(|&x| x >= 0), "negative closed-form count {out:?}");
    Profile3::from_array(out.map(|x| x as u64))
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// 3-edge profile by classifying every edge triple.
///
/// A triple's class follows from which of its three edge pairs meet: none
/// (3K2), one (P3+K2), two (P4), or all three, which is a claw when the
/// three share a vertex and a triangle otherwise.
pub fn profile3_bruteforce(g: &LabeledGraph, budget: u128) -> Result<Profile3> {
    let k = g.k();
    check_budget(choose(k as u64, 3), budget)?;
    let e: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u(), e.v())).collect();
    let meets = |a: (usize, usize), b: (usize, usize)| a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
    let total = (0..k)
        .into_par_iter()
        .map(|i| {
            // [meeting pairs 0..=2, claw, triangle]
            let mut tally = [0u64; 5];
            let a = e[i];
            for j in i + 1..k {
                let b = e[j];
                let ab = meets(a, b);
                let shared = if a.0 == b.0 || a.0 == b.1 { a.0 } else { a.1 };
                for &c in &e[j + 1..] {
                    let n = ab as usize + meets(a, c) as usize + meets(b, c) as usize;
                    if n < 3 {
                        tally[n] += 1;
                    } else if c.0 == shared || c.1 == shared {
                        tally[3] += 1;
                    } else {
                        tally[4] += 1;
                    }
                }
            }
            let [m, d, p, s, c] = tally;
            Profile3 { c, p, s, d, m }
        })
        .reduce(Profile3::default, Profile3::add);
    Ok(total)
}

/// 4-edge profile by classifying every edge quadruple.
pub fn profile4_bruteforce(g: &LabeledGraph, budget: u128) -> Result<Profile4> {
    let k = g.k();
    check_budget(choose(k as u64, 4), budget)?;
    let e = g.edges();
    let total = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut acc = Profile4::default();
            for j in i + 1..k {
                for l in j + 1..k {
                    for q in l + 1..k {
                        *acc.slot(classify4([e[i], e[j], e[l], e[q]])) += 1;
                    }
                }
            }
            acc
        })
        .reduce(Profile4::default, Profile4::merge);
    Ok(total)
}

/// Counts, by class, of the 3-edge subgraphs of `g` that contain edge `uv`.
/// `uv` must be an edge of `g`; `a` is `Σ_w C(deg w, 2)` for `g`.
fn edge_share(g: &LabeledGraph, uv: Edge, a: i64) -> [i64; 5] {
    let (u, v) = (uv.u(), uv.v());
    let k = g.k() as i64;
    let du = g.degree(u) as i64;
    let dv = g.degree(v) as i64;
    let cuv = g.common_neighbors(u, v) as i64;
    let su = g.neighbor_degree_sum(u) as i64;
    let sv = g.neighbor_degree_sum(v) as i64;

    let c = cuv;
    let s = c2((du - 1) as u64) as i64 + c2((dv - 1) as u64) as i64;
    // uv in the middle of the path, then uv at either end.
    let p = (du - 1) * (dv - 1) - cuv + (sv - du - dv + 1 - cuv) + (su - du - dv + 1 - cuv);
    // uv as the lone K2: P3s avoiding both endpoints.
    let touch_u = c2(du as u64) as i64 + su - du;
    let touch_v = c2(dv as u64) as i64 + sv - dv;
    let touch_both = du + dv - 2 + cuv;
    let lone = a - touch_u - touch_v + touch_both;
    // uv inside the P3, third edge disjoint from it.
    let in_path = (du - 1) * (k - du - dv + 2) - (su - dv) + cuv + (dv - 1) * (k - du - dv + 2) - (sv - du) + cuv;
    let d = lone + in_path;
    let m = c2((k - 1) as u64) as i64 - c - p - s - d;
    [c, p, s, d, m]
}

/// Applies `swap` to `g` in place and returns the induced profile change.
///
/// The change is the share of the added edge in the new graph minus the
/// share of the removed edge in the old one.
pub fn apply_swap_with_delta(g: &mut LabeledGraph, swap: EdgeSwap) -> Result<SwapDelta> {
    if swap.remove.v() >= g.n() || !g.has_edge(swap.remove.u(), swap.remove.v()) {
        return Err(Error::InvalidSwap(format!("{} is not an edge", swap.remove)));
    }
    let (r, x) = (swap.remove, swap.add);
    let a_before = profile2(g).a as i64;
    let before = edge_share(g, r, a_before);
    // P3 count of G - r + x, from the degrees of G.
    let deg_minus_r = |w: usize| g.degree(w) as i64 - r.touches(w) as i64;
    let a_after = a_before - (g.degree(r.u()) as i64 - 1) - (g.degree(r.v()) as i64 - 1)
        + deg_minus_r(x.u())
        + deg_minus_r(x.v());
    g.apply_swap_in_place(swap)?;
    let after = edge_share(g, swap.add, a_after);
    Ok(SwapDelta::from_array(std::array::from_fn(|i| after[i] - before[i])))
}

/// Profile change caused by `swap`, without mutating `g`.
pub fn profile3_delta(g: &LabeledGraph, swap: EdgeSwap) -> Result<SwapDelta> {
    let mut h = g.clone();
    apply_swap_with_delta(&mut h, swap)
}
