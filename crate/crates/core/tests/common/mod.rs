//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's counting or symmetry code.

#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};

use edgebal_core::GraphClass;
use rand::seq::SliceRandom;
use rand::Rng;

pub type EdgeSet = Vec<(usize, usize)>;

pub fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

pub fn choose(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// Uniform `k`-subset of the pairs of `[n]`.
pub fn random_edges(n: usize, k: usize, rng: &mut impl Rng) -> EdgeSet {
    let mut pairs: EdgeSet = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    pairs.truncate(k);
    pairs
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in edges {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Counts permutations of `[n]` preserving adjacency, by depth-first
/// extension of partial bijections.
pub fn brute_aut_count(n: usize, edges: &[(usize, usize)]) -> u128 {
    fn extend(i: usize, n: usize, adj: &[Vec<bool>], deg: &[usize], img: &mut Vec<usize>, used: &mut [bool]) -> u128 {
        if i == n {
            return 1;
        }
        let mut total = 0;
        for t in 0..n {
            if used[t] || deg[t] != deg[i] {
                continue;
            }
            if (0..i).any(|j| adj[i][j] != adj[t][img[j]]) {
                continue;
            }
            used[t] = true;
            img.push(t);
            total += extend(i + 1, n, adj, deg, img, used);
            img.pop();
            used[t] = false;
        }
        total
    }
    let adj = adjacency(n, edges);
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    extend(0, n, &adj, &deg, &mut Vec::with_capacity(n), &mut vec![false; n])
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Relabels the non-isolated vertices of an edge set to `0..s`.
pub fn support(edges: &[(usize, usize)]) -> (usize, EdgeSet) {
    let verts: BTreeSet<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let index = |x: usize| verts.iter().position(|&w| w == x).unwrap();
    let relabeled = edges.iter().map(|&(u, v)| norm(index(u), index(v))).collect();
    (verts.len(), relabeled)
}

/// Lexicographically smallest sorted edge list over all relabelings.
pub fn canonical_form(n: usize, edges: &[(usize, usize)]) -> EdgeSet {
    let mut best: Option<EdgeSet> = None;
    for_each_permutation(n, |p| {
        let mut e: EdgeSet = edges.iter().map(|&(u, v)| norm(p[u], p[v])).collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
    });
    best.unwrap_or_default()
}

/// Hand-written edge lists for each class, independent of the library's.
pub fn class_drawing(class: GraphClass) -> EdgeSet {
    use GraphClass::*;
    match class {
        P3 => vec![(0, 1), (1, 2)],
        TwoK2 => vec![(0, 1), (2, 3)],
        K3 => vec![(0, 1), (1, 2), (0, 2)],
        P4 => vec![(0, 1), (1, 2), (2, 3)],
        Claw => vec![(0, 1), (0, 2), (0, 3)],
        P3K2 => vec![(0, 1), (1, 2), (3, 4)],
        ThreeK2 => vec![(0, 1), (2, 3), (4, 5)],
        Paw => vec![(0, 1), (1, 2), (0, 2), (2, 3)],
        K3K2 => vec![(0, 1), (1, 2), (0, 2), (3, 4)],
        C4 => vec![(0, 1), (1, 2), (2, 3), (0, 3)],
        P5 => vec![(0, 1), (1, 2), (2, 3), (3, 4)],
        Fork => vec![(0, 1), (0, 2), (0, 3), (3, 4)],
        Star4 => vec![(0, 1), (0, 2), (0, 3), (0, 4)],
        P4K2 => vec![(0, 1), (1, 2), (2, 3), (4, 5)],
        ClawK2 => vec![(0, 1), (0, 2), (0, 3), (4, 5)],
        TwoP3 => vec![(0, 1), (1, 2), (3, 4), (4, 5)],
        P3TwoK2 => vec![(0, 1), (1, 2), (3, 4), (5, 6)],
        FourK2 => vec![(0, 1), (2, 3), (4, 5), (6, 7)],
    }
}

thread_local! {
    static CLASS_CACHE: RefCell<HashMap<EdgeSet, GraphClass>> = RefCell::new(HashMap::new());
}

/// Classifies a small edge set by canonical-form comparison. Results are
/// memoized on the support-relabeled edge list.
pub fn classify_by_canon(edges: &[(usize, usize)]) -> GraphClass {
    let (s, mut e) = support(edges);
    e.sort_unstable();
    if let Some(c) = CLASS_CACHE.with(|m| m.borrow().get(&e).copied()) {
        return c;
    }
    let canon = canonical_form(s, &e);
    let class = GraphClass::all()
        .filter(|c| c.edge_count() == edges.len())
        .find(|&c| {
            let (ds, de) = support(&class_drawing(c));
            ds == s && canonical_form(ds, &de) == canon
        })
        .expect("every small edge set belongs to a class");
    CLASS_CACHE.with(|m| m.borrow_mut().insert(e, class));
    class
}

/// Counts of each class among the `t`-subsets of `edges`, indexed like
/// `classes`.
pub fn census_by_canon(edges: &[(usize, usize)], classes: &[GraphClass], t: usize) -> Vec<u64> {
    let mut counts = vec![0u64; classes.len()];
    let k = edges.len();
    let mut idx: Vec<usize> = (0..t).collect();
    if t > k {
        return counts;
    }
    loop {
        let sub: EdgeSet = idx.iter().map(|&i| edges[i]).collect();
        let c = classify_by_canon(&sub);
        let pos = classes.iter().position(|&x| x == c).expect("class listed");
        counts[pos] += 1;
        let Some(i) = (0..t).rev().find(|&i| idx[i] != i + k - t) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
    counts
}

/// Number of distinct copies of `G` in `K_n` containing the edge set `h`,
/// by enumerating the whole `S_n`-orbit of `G`.
pub fn orbit_containment(n: usize, g: &[(usize, usize)], h: &[(usize, usize)]) -> u64 {
    let mut orbit: HashSet<Vec<(usize, usize)>> = HashSet::new();
    for_each_permutation(n, |p| {
        let mut e: EdgeSet = g.iter().map(|&(u, v)| norm(p[u], p[v])).collect();
        e.sort_unstable();
        orbit.insert(e);
    });
    let h: Vec<(usize, usize)> = h.iter().map(|&(u, v)| norm(u, v)).collect();
    orbit
        .iter()
        .filter(|copy| h.iter().all(|e| copy.binary_search(e).is_ok()))
        .count() as u64
}
