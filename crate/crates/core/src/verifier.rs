//! Independent certification of candidate graphs.
//!
//! Certification recounts every profile by exhaustive enumeration and never
//! looks at state carried by the search. Alongside the 3-edge check it
//! reports 2-edge balance, the automorphism order and index, and the
//! 4-edge class indices (which can never all agree).

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::admissibility::{target_profile, TargetProfile};
use crate::automorphism::{
    aut_order_with_budget, index_lambda, lambda_for_class, template_aut_order, AutResult, IndexReport,
    DEFAULT_NODE_BUDGET,
};
use crate::census::{
    choose, profile2, profile3, profile3_bruteforce, profile4_bruteforce, Profile2, Profile3, Profile4,
    DEFAULT_QUAD_BUDGET, DEFAULT_TRIPLE_BUDGET,
};
use crate::classes::GraphClass;
use crate::error::{Error, Result};
use crate::graph::{emit_graph6, pair_count, parse_graph6, LabeledGraph};

pub const CERTIFICATE_SCHEMA: &str = "edgebal.certificate/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub triple_budget: u128,
    pub quad_budget: u128,
    pub aut_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            triple_budget: DEFAULT_TRIPLE_BUDGET,
            quad_budget: DEFAULT_QUAD_BUDGET,
            aut_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMethod {
    BruteForce,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassIndex {
    pub class: GraphClass,
    pub count: u64,
    /// `|Aut(H)|` on `n` vertices, decimal.
    pub aut_order: String,
    /// `λ_{G:H}` as an exact rational.
    pub lambda: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourEdgeReport {
    pub n: usize,
    pub k: usize,
    pub profile4: Profile4,
    /// One entry per class that embeds in `n` vertices.
    pub classes: Vec<ClassIndex>,
    /// Embeddable classes with no copy in `G`.
    pub absent_classes: Vec<GraphClass>,
    /// Classes with more vertices than `n`.
    pub non_embeddable: Vec<GraphClass>,
    /// Distinct `λ` values over all embeddable classes.
    pub distinct_lambdas: usize,
    /// Distinct `λ` values over classes present in `G`.
    pub distinct_present_lambdas: usize,
    /// At least two present classes disagree on `λ`.
    pub imbalanced: bool,
    /// `c(k-3) = n(paw) + n(K3+K2)`: each 4-edge graph holding a triangle
    /// holds exactly one.
    pub triangle_incidence_holds: bool,
    /// `m(k-3) = 4·n(4K2) + 2·n(P3+2K2) + n(P4+K2)`.
    pub matching_incidence_holds: bool,
    /// `λ(paw) / λ(K3+K2)`, when both are nonzero.
    pub paw_to_k3k2_ratio: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub graph6: String,
    pub n: usize,
    pub k: usize,
    pub profile2: Profile2,
    pub profile3: Profile3,
    pub profile_method: ProfileMethod,
    /// False when the closed-form path had to stand in for enumeration.
    pub independent: bool,
    pub target: TargetProfile,
    pub balanced: bool,
    pub two_edge_balanced: bool,
    pub sums_consistent: bool,
    pub aut: AutResult,
    pub index: Option<IndexReport>,
    pub four_edge: Option<FourEdgeReport>,
    pub tool_version: String,
    pub timestamp: String,
}

impl Certificate {
    pub fn graph(&self) -> Result<LabeledGraph> {
        parse_graph6(&self.graph6)
    }

    /// Re-runs verification on the stored graph.
    pub fn reverify(&self, options: &VerifyOptions) -> Result<Certificate> {
        verify_certificate_with(&self.graph()?, self.n, self.k, options)
    }
}

/// `4b = (n-3)a`, the 2-edge balance condition. False when `a = 0`.
pub fn check_2edge_balance(g: &LabeledGraph, n: usize) -> bool {
    let Profile2 { a, b } = profile2(g);
    a > 0 && n >= 3 && 4 * b as u128 == (n as u128 - 3) * a as u128
}

/// `(n-6)(n+5) - (n-3)(n+2)`; equating the two 4K2 counts of a
/// 4-edge-balanced graph needs this to vanish, and it is `-24` for every
/// `n`.
pub fn nonexistence_identity(n: i128) -> i128 {
    (n - 6) * (n + 5) - (n - 3) * (n + 2)
}

pub fn verify_certificate(g: &LabeledGraph, n: usize, k: usize) -> Result<Certificate> {
    verify_certificate_with(g, n, k, &VerifyOptions::default())
}

pub fn verify_certificate_with(g: &LabeledGraph, n: usize, k: usize, options: &VerifyOptions) -> Result<Certificate> {
    if g.n() != n || g.k() != k {
        return Err(Error::DimensionMismatch {
            n,
            k,
            found_n: g.n(),
            found_k: g.k(),
        });
    }
    let target = target_profile(n, k)?;
    let (profile3, method) = match profile3_bruteforce(g, options.triple_budget) {
        Ok(p) => (p, ProfileMethod::BruteForce),
        Err(Error::BudgetExceeded { .. }) => (profile3(g), ProfileMethod::ClosedForm),
        Err(e) => return Err(e),
    };
    let profile2 = profile2(g);
    let sums_consistent = profile2.total() == choose(k as u64, 2) && profile3.total() == choose(k as u64, 3);
    let balanced = profile3 == target.profile3;
    let aut = aut_order_with_budget(g, options.aut_budget)?;
    let index = if balanced {
        Some(index_lambda(n, profile3.c, &aut)?)
    } else {
        None
    };
    let four_edge = match four_edge_report(g, &aut, options.quad_budget) {
        Ok(r) => Some(r),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Certificate {
        schema: CERTIFICATE_SCHEMA.into(),
        graph6: emit_graph6(g),
        n,
        k,
        profile2,
        profile3,
        profile_method: method,
        independent: method == ProfileMethod::BruteForce,
        target,
        balanced,
        two_edge_balanced: check_2edge_balance(g, n),
        sums_consistent,
        aut,
        index,
        four_edge,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        timestamp: chrono::Utc::now().to_rfc3339(),
    })
}

/// Per-class 4-edge indices of `g`, by enumeration.
pub fn four_edge_imbalance(g: &LabeledGraph, budget: u128) -> Result<FourEdgeReport> {
    let aut = aut_order_with_budget(g, DEFAULT_NODE_BUDGET)?;
    four_edge_report(g, &aut, budget)
}

fn four_edge_report(g: &LabeledGraph, aut: &AutResult, budget: u128) -> Result<FourEdgeReport> {
    let n = g.n();
    let k = g.k() as u128;
    let p4 = profile4_bruteforce(g, budget)?;
    let mut classes = Vec::new();
    let mut lambdas: Vec<(GraphClass, u64, BigRational)> = Vec::new();
    let mut non_embeddable = Vec::new();
    for (class, count) in p4.entries() {
        match template_aut_order(class, n) {
            Ok(aut_h) => {
                let lambda = lambda_for_class(count, &aut_h, &aut.order);
                classes.push(ClassIndex {
                    class,
                    count,
                    aut_order: aut_h.to_string(),
                    lambda: lambda.to_string(),
                });
                lambdas.push((class, count, lambda));
            }
            Err(Error::ClassDoesNotEmbed { .. }) => non_embeddable.push(class),
            Err(e) => return Err(e),
        }
    }
    let distinct = |it: &mut dyn Iterator<Item = &BigRational>| {
        let mut v: Vec<&BigRational> = it.collect();
        v.sort();
        v.dedup();
        v.len()
    };
    let distinct_lambdas = distinct(&mut lambdas.iter().map(|l| &l.2));
    let distinct_present_lambdas = distinct(&mut lambdas.iter().filter(|l| l.1 > 0).map(|l| &l.2));
    let absent_classes = lambdas.iter().filter(|l| l.1 == 0).map(|l| l.0).collect();

    let p3 = profile3(g);
    let k3 = k.saturating_sub(3);
    let triangle_incidence_holds = p3.c as u128 * k3 == p4.paw as u128 + p4.k3_k2 as u128;
    let matching_incidence_holds =
        p3.m as u128 * k3 == 4 * p4.four_k2 as u128 + 2 * p4.p3_two_k2 as u128 + p4.p4_k2 as u128;
    let lambda_of = |c: GraphClass| lambdas.iter().find(|l| l.0 == c).map(|l| l.2.clone());
    let paw_to_k3k2_ratio = match (lambda_of(GraphClass::Paw), lambda_of(GraphClass::K3K2)) {
        (Some(a), Some(b)) if !a.is_zero() && !b.is_zero() => Some((a / b).to_string()),
        _ => None,
    };
    Ok(FourEdgeReport {
        n,
        k: g.k(),
        profile4: p4,
        classes,
        absent_classes,
        non_embeddable,
        distinct_lambdas,
        distinct_present_lambdas,
        imbalanced: distinct_present_lambdas >= 2,
        triangle_incidence_holds,
        matching_incidence_holds,
        paw_to_k3k2_ratio,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallNEntry {
    pub n: usize,
    pub k: usize,
    pub graphs_checked: usize,
    pub balanced_found: usize,
    /// Smallest and largest `max λ - min λ` over the enumerated graphs,
    /// taken across the 3-edge classes that embed at this `n`.
    pub min_spread: String,
    pub max_spread: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallNReport {
    pub entries: Vec<SmallNEntry>,
    /// Values of `n` whose nontrivial range `4 ≤ k ≤ C(n,2)/2` is empty.
    pub vacuous: Vec<usize>,
    pub none_balanced: bool,
}

fn combinations(m: usize, r: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..r).collect();
    if r > m {
        return;
    }
    loop {
        f(&idx);
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + m - r) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Enumerates every graph in `G(n, k)` for `n ∈ {4, 5}` and nontrivial `k`
/// and checks 3-edge balance among the classes that fit in `n` vertices.
pub fn exhaustive_small_n() -> Result<SmallNReport> {
    let mut entries = Vec::new();
    let mut vacuous = Vec::new();
    for n in [4usize, 5] {
        let pairs: Vec<(usize, usize)> = (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        let big_n = pair_count(n);
        if 4 > big_n / 2 {
            vacuous.push(n);
            continue;
        }
        let classes: Vec<(GraphClass, BigUint)> = GraphClass::THREE_EDGE
            .into_iter()
            .filter_map(|c| template_aut_order(c, n).ok().map(|a| (c, a)))
            .collect();
        for k in 4..=big_n / 2 {
            let mut checked = 0usize;
            let mut balanced = 0usize;
            let mut spreads: Vec<BigRational> = Vec::new();
            let mut failure = None;
            combinations(big_n, k, |pick| {
                if failure.is_some() {
                    return;
                }
                let chosen: Vec<_> = pick.iter().map(|&i| pairs[i]).collect();
                let r = (|| -> Result<()> {
                    let g = LabeledGraph::new(n, &chosen)?;
                    let p = profile3_bruteforce(&g, DEFAULT_TRIPLE_BUDGET)?;
                    let aut = aut_order_with_budget(&g, DEFAULT_NODE_BUDGET)?;
                    let lambdas: Vec<BigRational> = classes
                        .iter()
                        .map(|(c, aut_h)| lambda_for_class(p.get(*c).unwrap(), aut_h, &aut.order))
                        .collect();
                    let hi = lambdas.iter().max().unwrap();
                    let lo = lambdas.iter().min().unwrap();
                    if hi == lo && !lo.is_zero() {
                        balanced += 1;
                    }
                    spreads.push(hi - lo);
                    checked += 1;
                    Ok(())
                })();
                if let Err(e) = r {
                    failure = Some(e);
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            let zero = BigRational::zero();
            entries.push(SmallNEntry {
                n,
                k,
                graphs_checked: checked,
                balanced_found: balanced,
                min_spread: spreads.iter().min().unwrap_or(&zero).to_string(),
                max_spread: spreads.iter().max().unwrap_or(&zero).to_string(),
            });
        }
    }
    let none_balanced = entries.iter().all(|e| e.balanced_found == 0);
    Ok(SmallNReport {
        entries,
        vacuous,
        none_balanced,
    })
}

/// Number of graphs in `G(n, k)`.
pub fn graph_count(n: usize, k: usize) -> BigUint {
    let big_n = pair_count(n);
    if k > big_n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(big_n - i) / BigUint::from(i + 1)
    })
}
