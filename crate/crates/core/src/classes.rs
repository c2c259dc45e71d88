//! The isolated-vertex-free isomorphism classes with 2, 3 and 4 edges.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Edge;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphClass {
    // two edges
    #[serde(rename = "P3")]
    P3,
    #[serde(rename = "2K2")]
    TwoK2,
    // three edges
    #[serde(rename = "K3")]
    K3,
    #[serde(rename = "P4")]
    P4,
    #[serde(rename = "K1,3")]
    Claw,
    #[serde(rename = "P3+K2")]
    P3K2,
    #[serde(rename = "3K2")]
    ThreeK2,
    // four edges
    /// Triangle with a pendant edge, `K3 + e`.
    #[serde(rename = "paw")]
    Paw,
    #[serde(rename = "K3+K2")]
    K3K2,
    #[serde(rename = "C4")]
    C4,
    #[serde(rename = "P5")]
    P5,
    /// Claw with one edge subdivided.
    #[serde(rename = "fork")]
    Fork,
    #[serde(rename = "K1,4")]
    Star4,
    #[serde(rename = "P4+K2")]
    P4K2,
    #[serde(rename = "K1,3+K2")]
    ClawK2,
    #[serde(rename = "2P3")]
    TwoP3,
    #[serde(rename = "P3+2K2")]
    P3TwoK2,
    #[serde(rename = "4K2")]
    FourK2,
}

use GraphClass::*;

impl GraphClass {
    pub const TWO_EDGE: [GraphClass; 2] = [P3, TwoK2];
    pub const THREE_EDGE: [GraphClass; 5] = [K3, P4, Claw, P3K2, ThreeK2];
    pub const FOUR_EDGE: [GraphClass; 11] = [Paw, K3K2, C4, P5, Fork, Star4, P4K2, ClawK2, TwoP3, P3TwoK2, FourK2];

    pub fn all() -> impl Iterator<Item = GraphClass> {
        Self::TWO_EDGE
            .into_iter()
            .chain(Self::THREE_EDGE)
            .chain(Self::FOUR_EDGE)
    }

    pub fn name(self) -> &'static str {
        match self {
            P3 => "P3",
            TwoK2 => "2K2",
            K3 => "K3",
            P4 => "P4",
            Claw => "K1,3",
            P3K2 => "P3+K2",
            ThreeK2 => "3K2",
            Paw => "paw",
            K3K2 => "K3+K2",
            C4 => "C4",
            P5 => "P5",
            Fork => "fork",
            Star4 => "K1,4",
            P4K2 => "P4+K2",
            ClawK2 => "K1,3+K2",
            TwoP3 => "2P3",
            P3TwoK2 => "P3+2K2",
            FourK2 => "4K2",
        }
    }

    pub fn from_name(name: &str) -> Option<GraphClass> {
        Self::all().find(|c| c.name().eq_ignore_ascii_case(name))
    }

    pub fn edge_count(self) -> usize {
        self.representative().len()
    }

    /// Number of non-isolated vertices.
    pub fn vertex_count(self) -> usize {
        match self {
            P3 | K3 => 3,
            TwoK2 | P4 | Claw | Paw | C4 => 4,
            P3K2 | K3K2 | P5 | Fork | Star4 => 5,
            ThreeK2 | P4K2 | ClawK2 | TwoP3 => 6,
            P3TwoK2 => 7,
            FourK2 => 8,
        }
    }

    /// Order of the automorphism group of the class restricted to its
    /// non-isolated vertices. The full group on `n` vertices is this times
    /// `(n - vertex_count)!`.
    pub fn support_aut_order(self) -> u64 {
        match self {
            P3 => 2,
            TwoK2 => 8,
            K3 => 6,
            P4 => 2,
            Claw => 6,
            P3K2 => 4,
            ThreeK2 => 48,
            Paw => 2,
            K3K2 => 12,
            C4 => 8,
            P5 => 2,
            Fork => 2,
            Star4 => 24,
            P4K2 => 4,
            ClawK2 => 12,
            TwoP3 => 8,
            P3TwoK2 => 16,
            FourK2 => 384,
        }
    }

    /// A copy of the class on vertices `0..vertex_count`.
    pub fn representative(self) -> &'static [(usize, usize)] {
        match self {
            P3 => &[(0, 1), (1, 2)],
            TwoK2 => &[(0, 1), (2, 3)],
            K3 => &[(0, 1), (1, 2), (0, 2)],
            P4 => &[(0, 1), (1, 2), (2, 3)],
            Claw => &[(0, 1), (0, 2), (0, 3)],
            P3K2 => &[(0, 1), (1, 2), (3, 4)],
            ThreeK2 => &[(0, 1), (2, 3), (4, 5)],
            Paw => &[(0, 1), (1, 2), (0, 2), (2, 3)],
            K3K2 => &[(0, 1), (1, 2), (0, 2), (3, 4)],
            C4 => &[(0, 1), (1, 2), (2, 3), (0, 3)],
            P5 => &[(0, 1), (1, 2), (2, 3), (3, 4)],
            Fork => &[(0, 1), (0, 2), (0, 3), (3, 4)],
            Star4 => &[(0, 1), (0, 2), (0, 3), (0, 4)],
            P4K2 => &[(0, 1), (1, 2), (2, 3), (4, 5)],
            ClawK2 => &[(0, 1), (0, 2), (0, 3), (4, 5)],
            TwoP3 => &[(0, 1), (1, 2), (3, 4), (4, 5)],
            P3TwoK2 => &[(0, 1), (1, 2), (3, 4), (5, 6)],
            FourK2 => &[(0, 1), (2, 3), (4, 5), (6, 7)],
        }
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Vertices and degrees of a small edge set, sorted by vertex.
struct Support<const M: usize> {
    verts: [usize; M],
    deg: [u8; M],
    len: usize,
}

impl<const M: usize> Support<M> {
    fn of(edges: &[Edge]) -> Self {
        let mut s = Support {
            verts: [usize::MAX; M],
            deg: [0; M],
            len: 0,
        };
        for e in edges {
            for w in [e.u(), e.v()] {
                match s.verts[..s.len].iter().position(|&x| x == w) {
                    Some(i) => s.deg[i] += 1,
                    None => {
                        s.verts[s.len] = w;
                        s.deg[s.len] = 1;
                        s.len += 1;
                    }
                }
            }
        }
        s
    }

    fn max_degree(&self) -> u8 {
        self.deg[..self.len].iter().copied().max().unwrap_or(0)
    }

    fn count_degree(&self, d: u8) -> usize {
        self.deg[..self.len].iter().filter(|&&x| x == d).count()
    }

    fn vertices_of_degree(&self, d: u8) -> impl Iterator<Item = usize> + '_ {
        (0..self.len)
            .filter(move |&i| self.deg[i] == d)
            .map(move |i| self.verts[i])
    }
}

/// Classifies a pair of distinct edges.
pub fn classify2(edges: [Edge; 2]) -> GraphClass {
    let [e, f] = edges;
    if e.touches(f.u()) || e.touches(f.v()) {
        P3
    } else {
        TwoK2
    }
}

/// Classifies three distinct edges by support size and maximum degree.
pub fn classify3(edges: [Edge; 3]) -> GraphClass {
    let s = Support::<6>::of(&edges);
    match s.len {
        3 => K3,
        4 if s.max_degree() == 3 => Claw,
        4 => P4,
        5 => P3K2,
        6 => ThreeK2,
        _ => unreachable!("three distinct edges span 3..=6 vertices"),
    }
}

fn has_triangle(edges: &[Edge; 4]) -> bool {
    (0..4).any(|skip| {
        let mut t = [edges[0]; 3];
        let mut j = 0;
        for (i, &e) in edges.iter().enumerate() {
            if i != skip {
                t[j] = e;
                j += 1;
            }
        }
        Support::<6>::of(&t).len == 3
    })
}

/// Classifies four distinct edges by support size, degree multiset and
/// triangle presence. Degree multiset `{2,2,1,1,1,1}` is shared by `P4+K2`
/// and `2P3`; they differ in whether the two degree-2 vertices are adjacent.
pub fn classify4(edges: [Edge; 4]) -> GraphClass {
    let s = Support::<8>::of(&edges);
    match s.len {
        4 => {
            if s.max_degree() == 3 {
                Paw
            } else {
                C4
            }
        }
        5 => match s.max_degree() {
            4 => Star4,
            3 => Fork,
            _ if has_triangle(&edges) => K3K2,
            _ => P5,
        },
        6 => {
            if s.max_degree() == 3 {
                ClawK2
            } else {
                debug_assert_eq!(s.count_degree(2), 2);
                let mut mids = s.vertices_of_degree(2);
                let (a, b) = (mids.next().unwrap(), mids.next().unwrap());
                if edges.contains(&Edge::new(a, b)) {
                    P4K2
                } else {
                    TwoP3
                }
            }
        }
        7 => P3TwoK2,
        8 => FourK2,
        _ => unreachable!("four distinct edges span 4..=8 vertices"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges<const M: usize>(pairs: &[(usize, usize)]) -> [Edge; M] {
        let v: Vec<_> = pairs.iter().map(|&(a, b)| Edge::new(a, b)).collect();
        v.try_into().unwrap()
    }

    #[test]
    fn representatives_classify_to_themselves() {
        for c in GraphClass::all() {
            let rep = c.representative();
            let got = match rep.len() {
                2 => classify2(edges(rep)),
                3 => classify3(edges(rep)),
                4 => classify4(edges(rep)),
                _ => unreachable!(),
            };
            assert_eq!(got, c, "{c}");
            let verts = rep.iter().flat_map(|&(a, b)| [a, b]).max().unwrap() + 1;
            assert_eq!(verts, c.vertex_count(), "{c}");
        }
    }

    #[test]
    fn three_edge_examples() {
        assert_eq!(classify3(edges(&[(0, 1), (1, 2), (2, 0)])), K3);
        assert_eq!(classify3(edges(&[(0, 1), (1, 2), (2, 3)])), P4);
        assert_eq!(classify3(edges(&[(0, 1), (2, 3), (4, 5)])), ThreeK2);
        assert_eq!(classify3(edges(&[(5, 9), (9, 2), (9, 7)])), Claw);
    }

    #[test]
    fn names_round_trip() {
        for c in GraphClass::all() {
            assert_eq!(GraphClass::from_name(c.name()), Some(c));
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.name()));
        }
    }
}
