//! Acceptance gate: ten criteria, one pass/fail line each (visible with
//! `--nocapture`). Every check compares library output against values
//! frozen from independent derivations.

use bzphylo::bridge::{
    bz_cubic_relation_count, check_inclusion, counterexample_m_ge_4,
    hilbert_independence_experiment, phi_gamma_check, verify_relation, GeneratorMultiset,
};
use bzphylo::bz::{enumerate_fiber, minimal_generators};
use bzphylo::cyclic::{
    degree_one_elements, saturation_gap, tripod_vertices, EdgeLabelling, PhyloElement,
};
use bzphylo::graphs::{enumerate_trivalent_graphs, make_gamma_gn, Graph};
use bzphylo::weights::{lr_coefficient, level_one_block_dim, DominantWeight, LevelOneWeight};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

fn report(n: u32, ok: bool, detail: &str) {
    println!("criterion {n}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

/// All weights of the given modulus with every coordinate at most
/// `coord_bound`.
fn weights_coordwise(m: u32, coord_bound: u32) -> Vec<DominantWeight> {
    let k = (m - 1) as usize;
    let mut out = Vec::new();
    let mut coords = vec![0u32; k];
    loop {
        out.push(DominantWeight::new(m, coords.clone()).unwrap());
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            if coords[i] < coord_bound {
                coords[i] += 1;
                break;
            }
            coords[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_01_fiber_counts_match_lr() {
    let start = Instant::now();
    let mut checked = 0usize;
    for (m, coord_bound) in [(3u32, 2u32), (4, 1)] {
        let ws = weights_coordwise(m, coord_bound);
        let mut triples = Vec::with_capacity(ws.len().pow(3));
        for i in 0..ws.len() {
            for j in 0..ws.len() {
                for k in 0..ws.len() {
                    triples.push((i, j, k));
                }
            }
        }
        let bad: Vec<String> = triples
            .par_iter()
            .filter_map(|&(i, j, k)| {
                let fiber = enumerate_fiber(m, &ws[i], &ws[j], &ws[k]).unwrap().len() as u64;
                let lr = lr_coefficient(&ws[i], &ws[j], &ws[k]).unwrap();
                (fiber != lr).then(|| {
                    format!(
                        "m={m} ({:?};{:?};{:?}): fiber {fiber} vs lr {lr}",
                        ws[i].coords(),
                        ws[j].coords(),
                        ws[k].coords()
                    )
                })
            })
            .collect();
        assert_eq!(triples.len(), ws.len().pow(3));
        checked += triples.len();
        assert!(bad.is_empty(), "disagreements: {bad:?}");
    }
    let elapsed = start.elapsed();
    report(
        1,
        checked == 729 + 512 && elapsed.as_secs() < 300,
        &format!("fiber size equals the triple multiplicity on all {checked} weight triples ({elapsed:.1?})"),
    );
}

#[test]
fn criterion_02_minimal_generators_exact() {
    let pr_set = |m: u32, bound: u32| -> BTreeSet<Vec<Vec<u32>>> {
        minimal_generators(m, bound)
            .unwrap()
            .iter()
            .map(|t| {
                let (l, u, v) = t.pr().unwrap();
                vec![l.coords().to_vec(), u.coords().to_vec(), v.coords().to_vec()]
            })
            .collect()
    };
    let got2 = pr_set(2, 2);
    let want2: BTreeSet<Vec<Vec<u32>>> = [
        vec![vec![1], vec![0], vec![1]],
        vec![vec![1], vec![1], vec![0]],
        vec![vec![0], vec![1], vec![1]],
    ]
    .into_iter()
    .collect();
    let got3 = pr_set(3, 3);
    let want3: BTreeSet<Vec<Vec<u32>>> = [
        vec![vec![1, 0], vec![1, 0], vec![1, 0]],
        vec![vec![0, 1], vec![0, 1], vec![0, 1]],
        vec![vec![1, 0], vec![0, 1], vec![0, 0]],
        vec![vec![0, 1], vec![1, 0], vec![0, 0]],
        vec![vec![0, 0], vec![1, 0], vec![0, 1]],
        vec![vec![0, 0], vec![0, 1], vec![1, 0]],
        vec![vec![0, 1], vec![0, 0], vec![1, 0]],
        vec![vec![1, 0], vec![0, 0], vec![0, 1]],
    ]
    .into_iter()
    .collect();
    report(
        2,
        got2 == want2 && got3 == want3,
        &format!(
            "{} generators for m=2 and {} for m=3, projections match the known lists",
            got2.len(),
            got3.len()
        ),
    );
}

#[test]
fn criterion_03_tripod_vertex_counts() {
    let ok = (2u32..=6).all(|m| tripod_vertices(m).unwrap().len() == (m * m) as usize);
    report(3, ok, "tripod has m^2 degree-one elements for m = 2..6");
}

/// Ten trivalent graphs spanning seven (genus, leaves) types.
fn graph_suite() -> Vec<(usize, usize, Graph)> {
    let mut suite = Vec::new();
    for &(g, n) in &[(0usize, 3usize), (0, 4), (1, 1), (1, 2), (2, 2)] {
        suite.push((g, n, make_gamma_gn(g, n).unwrap()));
    }
    for g in enumerate_trivalent_graphs(0, 6, usize::MAX).unwrap() {
        suite.push((0, 6, g));
    }
    for g in enumerate_trivalent_graphs(1, 3, usize::MAX).unwrap() {
        suite.push((1, 3, g));
    }
    assert!(suite.len() >= 8);
    suite
}

#[test]
fn criterion_04_degree_one_counts() {
    let suite = graph_suite();
    let mut checks = 0usize;
    for (g, n, graph) in &suite {
        for m in 2u32..=4 {
            let count = degree_one_elements(graph, m).unwrap().len() as u64;
            let expected = u64::from(m).pow((*g + *n - 1) as u32);
            assert_eq!(count, expected, "type ({g},{n}) m={m}");
            checks += 1;
        }
    }
    report(
        4,
        checks == suite.len() * 3,
        &format!("degree-one count is m^(g+n-1) on {} graphs for m = 2,3,4", suite.len()),
    );
}

#[test]
fn criterion_05_block_dimensions() {
    let suite = graph_suite();
    let mut checks = 0usize;
    for (g, _, graph) in &suite {
        let leaves: Vec<String> = graph.leaf_edges().iter().cloned().collect();
        let n = leaves.len();
        for m in 2u32..=5 {
            let tuples = u64::from(m).pow(n as u32);
            // Every tuple for m <= 3; a deterministic sample beyond.
            let stride = if m <= 3 { 1 } else { (tuples / 24).max(1) };
            let mut t = 0u64;
            while t < tuples {
                let mut rest = t;
                let mut sum = 0u64;
                let mut assignment = BTreeMap::new();
                for e in &leaves {
                    let idx = (rest % u64::from(m)) as u32;
                    rest /= u64::from(m);
                    sum += u64::from(idx);
                    assignment.insert(e.clone(), LevelOneWeight::new(m, idx).unwrap());
                }
                let dim = level_one_block_dim(graph, &assignment, m).unwrap();
                let expected = if sum % u64::from(m) == 0 {
                    u64::from(m).pow(*g as u32)
                } else {
                    0
                };
                assert_eq!(dim, expected, "genus {g}, m={m}, tuple {t}");
                checks += 1;
                t += stride;
            }
        }
    }
    report(
        5,
        checks > 0,
        &format!("block dimension is m^genus exactly on zero-sum tuples ({checks} tuples checked)"),
    );
}

#[test]
fn criterion_06_inclusion_and_equality() {
    let start = Instant::now();
    for m in [2u32, 3] {
        let r = check_inclusion(m, 3).unwrap();
        assert!(r.inclusion_certified(), "m={m} forward: {:?}", r.forward_violations);
        assert!(r.equality_certified(), "m={m} reverse: {:?}", r.equality_violations);
    }
    let r4 = check_inclusion(4, 2).unwrap();
    assert!(r4.inclusion_certified(), "m=4 forward: {:?}", r4.forward_violations);
    assert!(!r4.equality_certified());
    // The explicit escapee: validates, projects as stated, and is not a
    // degree-2 element of the labelling semigroup.
    let t = counterexample_m_ge_4(4).unwrap();
    let (lam, mu, nu) = t.pr().unwrap();
    assert_eq!(
        (lam.coords(), mu.coords(), nu.coords()),
        (&[1u32, 0, 1][..], &[0u32, 1, 0][..], &[0u32, 1, 0][..])
    );
    let coords: BTreeMap<String, Vec<u32>> = [
        ("e1".to_string(), lam.coords().to_vec()),
        ("e2".to_string(), mu.coords().to_vec()),
        ("e3".to_string(), nu.coords().to_vec()),
    ]
    .into_iter()
    .collect();
    let x = PhyloElement::new(4, 2, coords).unwrap();
    let not_member = !bzphylo::cyclic::is_member(&Graph::tripod(), 4, &x).unwrap().member;
    let elapsed = start.elapsed();
    report(
        6,
        not_member && elapsed.as_secs() < 120,
        &format!(
            "m=2,3 clean at bound 3; m=4 inclusion holds and the escapee fails membership ({elapsed:.1?})"
        ),
    );
}

#[test]
fn criterion_07_tripod_saturation() {
    let tripod = Graph::tripod();
    let mut gaps = 0usize;
    for m in [2u32, 3] {
        for d in 0..=4 {
            gaps += saturation_gap(&tripod, m, d).unwrap().len();
        }
    }
    report(7, gaps == 0, "no cone point is missing from the tripod semigroup up to degree 4");
}

#[test]
fn criterion_08_hilbert_independence_m2() {
    let mut ok = true;
    let mut counts = Vec::new();
    for (genus, leaves) in [(0usize, 6usize), (1, 3)] {
        let r = hilbert_independence_experiment(2, genus, leaves, 3).unwrap();
        counts.push(r.table.len());
        ok &= r.all_agree;
        ok &= r.table.windows(2).all(|w| w[0] == w[1]);
    }
    // The same experiment at m = 3 finds a concrete disagreeing pair;
    // the experiment re-verifies any witness by direct enumeration
    // before reporting it. Both outcomes are admissible here.
    let r3 = hilbert_independence_experiment(3, 1, 2, 3).unwrap();
    let m3_note = match &r3.disagreement {
        Some(d) => format!("m=3 (1,2) witness at {d}"),
        None => "m=3 (1,2) columns agree within bounds".to_string(),
    };
    report(
        8,
        ok && counts == [2, 3],
        &format!(
            "all {} (0,6) and {} (1,3) graphs share one m=2 column; {m3_note}",
            counts[0], counts[1]
        ),
    );
}

fn tripod_vertex(m: u32, a: u32, b: u32, c: u32) -> PhyloElement {
    let labels: BTreeMap<String, u32> = [
        ("e1".to_string(), a),
        ("e2".to_string(), b),
        ("e3".to_string(), c),
    ]
    .into_iter()
    .collect();
    EdgeLabelling::new(m, labels).unwrap().to_element()
}

#[test]
fn criterion_09_cubic_relations() {
    let m = 3;
    let lhs = GeneratorMultiset::Labelling(vec![
        tripod_vertex(m, 1, 1, 1),
        tripod_vertex(m, 2, 2, 2),
        PhyloElement::zero(m, 1),
    ]);
    let orbit1 = GeneratorMultiset::Labelling(vec![
        tripod_vertex(m, 1, 2, 0),
        tripod_vertex(m, 0, 1, 2),
        tripod_vertex(m, 2, 0, 1),
    ]);
    let orbit2 = GeneratorMultiset::Labelling(vec![
        tripod_vertex(m, 2, 1, 0),
        tripod_vertex(m, 0, 2, 1),
        tripod_vertex(m, 1, 0, 2),
    ]);
    let both = verify_relation(m, &lhs, &orbit1).unwrap() && verify_relation(m, &lhs, &orbit2).unwrap();
    let sweep = bz_cubic_relation_count().unwrap();
    report(
        9,
        both && sweep == 1,
        "both labelling cubics hold and the triangle generators admit exactly one",
    );
}

#[test]
fn criterion_10_graded_coverage() {
    let mut ok = true;
    let mut details = Vec::new();
    for graph in [Graph::tripod(), make_gamma_gn(0, 4).unwrap()] {
        let r = phi_gamma_check(&graph, 3, 2).unwrap();
        ok &= r.fully_covered();
        details.push(
            r.levels.iter().map(|l| format!("{}/{}", l.covered, l.elements)).collect::<Vec<_>>().join(" "),
        );
    }
    report(
        10,
        ok,
        &format!("every element covered at levels 0..=2 (tripod {}; 4-leaf tree {})", details[0], details[1]),
    );
}
