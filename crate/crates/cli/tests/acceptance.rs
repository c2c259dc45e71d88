//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Reference values come from independent oracles in
//! `crates/core/tests/common`, not from the library under test.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use edgebal_core::admissibility::TargetProfile;
use edgebal_core::automorphism::factorial;
use edgebal_core::census::apply_swap_with_delta;
use edgebal_core::{
    aut_order, check_2edge_balance, exhaustive_small_n, four_edge_imbalance, nonexistence_identity, profile2, profile3,
    profile3_bruteforce, profile4_bruteforce, run_search, target_profile, template_aut_order, verify_certificate,
    AnnealConfig, Certificate, Edge, EdgeSwap, GraphClass, LabeledGraph, Profile3,
};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

const TABLE_3: [(usize, usize); 20] = [
    (13, 21),
    (21, 66),
    (34, 260),
    (77, 1378),
    (84, 1275),
    (114, 3151),
    (139, 3570),
    (203, 5644),
    (229, 11546),
    (255, 8321),
    (292, 12599),
    (309, 2976),
    (311, 10621),
    (414, 37101),
    (444, 23941),
    (451, 15369),
    (459, 30706),
    (531, 29659),
    (539, 49896),
    (571, 61776),
];

const SCAN_LIMIT: Duration = Duration::from_secs(5);
const DELTA_LIMIT: Duration = Duration::from_secs(30);
const COMPLEMENT_LIMIT: Duration = Duration::from_secs(1);
const SWEEP_LIMIT: Duration = Duration::from_secs(1);
const SMALL_N_LIMIT: Duration = Duration::from_secs(1);
const SEARCH_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_edgebal"))
        .args(["--no-record", "scan", "--limit", "20"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return fail(format!("exit {:?}", out.status.code()));
    }
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let pairs: Vec<(usize, usize)> = doc["pairs"]
        .as_array()
        .ok_or("no pairs array")?
        .iter()
        .map(|p| (p["n"].as_u64().unwrap() as usize, p["k"].as_u64().unwrap() as usize))
        .collect();
    if pairs != TABLE_3 {
        return fail(format!("got {pairs:?}"));
    }
    if elapsed >= SCAN_LIMIT {
        return fail(format!("took {elapsed:?}"));
    }
    Ok(format!("20 pairs (13,21)..(571,61776) in {elapsed:.2?}"))
}

fn criterion_2() -> Check {
    let cases = [
        ((13, 21), [5, 150, 50, 675, 450], Some((60, 150))),
        ((21, 66), [40, 2160, 720, 18360, 24480], None),
    ];
    for ((n, k), want, two) in cases {
        let t = target_profile(n, k).map_err(|e| e.to_string())?;
        if t.profile3.as_array() != want {
            return fail(format!("({n},{k}): {:?}", t.profile3));
        }
        if t.profile3.total() != common::choose(k as u128, 3) {
            return fail(format!("({n},{k}) sums to {}", t.profile3.total()));
        }
        if let Some((a, b)) = two {
            if (t.profile2.a, t.profile2.b) != (a, b) {
                return fail(format!("({n},{k}) 2-edge {:?}", t.profile2));
            }
        }
    }
    Ok("(13,21) -> (5,150,50,675,450) sum 1330, (60,150); (21,66) -> sum 45760".into())
}

fn criterion_3() -> Check {
    let mut rng = StdRng::seed_from_u64(0xACCE);
    let cases = 250;
    for case in 0..cases {
        let n = rng.gen_range(4..=12);
        let k = rng.gen_range(0..=12usize.min(n * (n - 1) / 2));
        let e = common::random_edges(n, k, &mut rng);
        let g = LabeledGraph::new(n, &e).map_err(|e| e.to_string())?;
        let oracle3 = common::census_by_canon(&e, &GraphClass::THREE_EDGE, 3);
        let closed = profile3(&g);
        if closed.as_array().to_vec() != oracle3 {
            return fail(format!("case {case}: closed form {closed:?} vs oracle {oracle3:?}"));
        }
        let k = k as u128;
        let p4 = profile4_bruteforce(&g, u128::MAX).map_err(|e| e.to_string())?;
        let sums = (profile2(&g).total(), closed.total(), p4.total());
        let want = (common::choose(k, 2), common::choose(k, 3), common::choose(k, 4));
        if sums != want {
            return fail(format!("case {case}: sums {sums:?} vs {want:?}"));
        }
    }
    Ok(format!(
        "{cases} random graphs (n<=12, k<=12) match; sums equal C(k,2), C(k,3), C(k,4)"
    ))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xDE17A);
    let (n, k, swaps) = (30, 80, 10_000);
    let mut g = LabeledGraph::random(n, k, &mut rng).map_err(|e| e.to_string())?;
    let mut maintained = profile3(&g);
    for step in 0..swaps {
        let remove = g.edges()[rng.gen_range(0..g.k())];
        let add = loop {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v && !g.has_edge(u, v) {
                break Edge::new(u, v);
            }
        };
        let delta = apply_swap_with_delta(&mut g, EdgeSwap::new(remove, add)).map_err(|e| e.to_string())?;
        maintained = maintained.apply(delta).map_err(|e| e.to_string())?;
        let recount = profile3_bruteforce(&g, u128::MAX).map_err(|e| e.to_string())?;
        if recount != maintained {
            return fail(format!("step {step}: {maintained:?} vs {recount:?}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= DELTA_LIMIT {
        return fail(format!("took {elapsed:?}"));
    }
    Ok(format!("{swaps} swaps on G(30,80) match enumeration in {elapsed:.2?}"))
}

/// Certificate from the first of the gate seeds that succeeds.
fn criterion_5() -> Result<(String, Certificate), String> {
    let start = Instant::now();
    let mut successes = 0;
    let mut first: Option<Certificate> = None;
    for seed in SEARCH_SEEDS {
        let config = AnnealConfig {
            seed,
            ..AnnealConfig::default()
        };
        let r = run_search(13, 21, &config).map_err(|e| e.to_string())?;
        if !r.found() {
            continue;
        }
        let g = r.best_graph().map_err(|e| e.to_string())?;
        let cert = verify_certificate(&g, 13, 21).map_err(|e| e.to_string())?;
        if !cert.balanced || !cert.independent {
            return fail(format!(
                "seed {seed}: zero score but certificate says balanced={}",
                cert.balanced
            ));
        }
        successes += 1;
        first.get_or_insert(cert);
    }
    match first {
        Some(cert) => Ok((
            format!(
                "{successes}/5 seeds found a verified graph ({}) in {:.2?}",
                cert.graph6,
                start.elapsed()
            ),
            cert,
        )),
        None => fail("no seed found a zero-score graph"),
    }
}

fn criterion_6(cert: &Certificate) -> Check {
    let ix = cert.index.as_ref().ok_or("certificate has no index")?;
    let ten = factorial(10);
    let product = &ix.lambda * &cert.aut.order;
    if product != BigUint::from(30u32) * &ten {
        return fail(format!("lambda*|Aut| = {product}"));
    }
    // Independent check of |Aut| by permutation counting.
    let g = cert.graph().map_err(|e| e.to_string())?;
    let edges: Vec<(usize, usize)> = g.sorted_edges().iter().map(|e| (e.u(), e.v())).collect();
    if BigUint::from(common::brute_aut_count(13, &edges)) != cert.aut.order {
        return fail("automorphism order disagrees with permutation count");
    }
    if cert.aut.order == BigUint::from(2u32) && ix.lambda != BigUint::from(15u32) * &ten {
        return fail(format!("|Aut| = 2 but lambda = {}", ix.lambda));
    }
    Ok(format!(
        "|Aut| = {}, lambda = {} * 10!, lambda*|Aut| = 30 * 10!",
        cert.aut.order, ix.factor
    ))
}

fn criterion_7(cert: &Certificate) -> Check {
    let g = cert.graph().map_err(|e| e.to_string())?;
    if !check_2edge_balance(&g, 13) {
        return fail("not 2-edge-balanced");
    }
    let start = Instant::now();
    let c = g.complement();
    let p = profile3_bruteforce(&c, u128::MAX).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let want = TargetProfile::from_formulas(13, 57)
        .map_err(|e| e.to_string())?
        .profile3;
    if p != want || p.total() != 29_260 {
        return fail(format!("complement {p:?} vs {want:?}"));
    }
    // Second opinion on the complement by canonical-form enumeration.
    let edges: Vec<(usize, usize)> = c.sorted_edges().iter().map(|e| (e.u(), e.v())).collect();
    let oracle = common::census_by_canon(&edges, &GraphClass::THREE_EDGE, 3);
    if Profile3::from_array(oracle.try_into().unwrap()) != p {
        return fail("canonical-form census of complement disagrees");
    }
    if elapsed >= COMPLEMENT_LIMIT {
        return fail(format!("complement census took {elapsed:?}"));
    }
    Ok(format!(
        "2-edge-balanced; complement profile {:?} over 29260 triples in {elapsed:.2?}",
        p.as_array()
    ))
}

fn criterion_8(cert: &Certificate) -> Check {
    let start = Instant::now();
    let bad = (8..=1_000_000i128).find(|&n| nonexistence_identity(n) != -24);
    let elapsed = start.elapsed();
    if let Some(n) = bad {
        return fail(format!("identity is {} at n = {n}", nonexistence_identity(n)));
    }
    // Oracle: expand the two products directly.
    if (8..=1000i128).any(|n| (n - 6) * (n + 5) - (n - 3) * (n + 2) != -24) {
        return fail("oracle expansion is not constant");
    }
    if elapsed >= SWEEP_LIMIT {
        return fail(format!("sweep took {elapsed:?}"));
    }
    let g = cert.graph().map_err(|e| e.to_string())?;
    let report = match &cert.four_edge {
        Some(r) => r.clone(),
        None => four_edge_imbalance(&g, u128::MAX).map_err(|e| e.to_string())?,
    };
    if report.distinct_present_lambdas < 2 {
        return fail(format!(
            "only {} distinct 4-edge indices",
            report.distinct_present_lambdas
        ));
    }
    Ok(format!(
        "identity = -24 on [8, 10^6] in {elapsed:.2?}; {} distinct 4-edge indices",
        report.distinct_present_lambdas
    ))
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let r = exhaustive_small_n().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let checked: usize = r.entries.iter().map(|e| e.graphs_checked).sum();
    // C(10,4) + C(10,5) graphs on five vertices; n = 4 has no nontrivial k.
    let expected = (common::choose(10, 4) + common::choose(10, 5)) as usize;
    if !r.none_balanced || checked != expected || r.vacuous != [4] {
        return fail(format!("none_balanced={} checked={checked}", r.none_balanced));
    }
    if elapsed >= SMALL_N_LIMIT {
        return fail(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{checked} graphs on 5 vertices, none balanced; n = 4 vacuous; {elapsed:.2?}"
    ))
}

fn criterion_10() -> Check {
    let mut rng = StdRng::seed_from_u64(0xA07);
    let mut tested = 0;
    while tested < 100 {
        let n = rng.gen_range(2..=10);
        let k = rng.gen_range(0..=n * (n - 1) / 2);
        let e = common::random_edges(n, k, &mut rng);
        let (support, _) = common::support(&e);
        if support > 8 {
            continue;
        }
        let g = LabeledGraph::new(n, &e).map_err(|e| e.to_string())?;
        let got = aut_order(&g).map_err(|e| e.to_string())?.order;
        let want = BigUint::from(common::brute_aut_count(n, &e));
        if got != want {
            return fail(format!("{e:?} on {n}: {got} vs {want}"));
        }
        tested += 1;
    }
    let mut embeddings = 0;
    for class in GraphClass::all() {
        let v = class.vertex_count();
        for n in v..v + 5 {
            let g = LabeledGraph::new(n, &common::class_drawing(class)).map_err(|e| e.to_string())?;
            let template = template_aut_order(class, n).map_err(|e| e.to_string())?;
            let computed = aut_order(&g).map_err(|e| e.to_string())?.order;
            if template != computed {
                return fail(format!("{class} at n={n}: template {template} vs {computed}"));
            }
            embeddings += 1;
        }
    }
    Ok(format!(
        "100 random graphs match permutation counts; {embeddings} template embeddings agree"
    ))
}

fn report(id: usize, name: &str, check: &Check) -> bool {
    match check {
        Ok(detail) => println!("PASS  criterion {id:>2}  {name}: {detail}"),
        Err(why) => println!("FAIL  criterion {id:>2}  {name}: {why}"),
    }
    check.is_ok()
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report(1, "admissible scan", &criterion_1());
    ok &= report(2, "target profiles", &criterion_2());
    ok &= report(3, "census oracle", &criterion_3());
    ok &= report(4, "swap delta", &criterion_4());
    match criterion_5() {
        Ok((detail, cert)) => {
            ok &= report(5, "search (13,21)", &Ok(detail));
            ok &= report(6, "index", &criterion_6(&cert));
            ok &= report(7, "2-edge balance and complement", &criterion_7(&cert));
            ok &= report(8, "4-edge nonexistence", &criterion_8(&cert));
        }
        Err(why) => {
            ok = false;
            report(5, "search (13,21)", &Err(why));
            for (id, name) in [
                (6, "index"),
                (7, "2-edge balance and complement"),
                (8, "4-edge nonexistence"),
            ] {
                report(id, name, &Err("needs a certificate from criterion 5".into()));
            }
        }
    }
    ok &= report(9, "small-n exhaustive check", &criterion_9());
    ok &= report(10, "automorphism oracle", &criterion_10());
    if ok {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
