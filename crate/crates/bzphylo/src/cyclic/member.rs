//! Membership, witnesses, brute-force enumeration and saturation.
//!
//! A degree-`d` element of the graded semigroup is a sum of `d` tree
//! labellings whose aggregate count vectors on the two halves of every
//! split edge are reversals of each other. The individual summands need
//! not match across a split pair; only the sums do. Membership over a
//! tree is a purely local question at each inner vertex, and a witness is
//! glued from local decompositions by matching label multisets edge by
//! edge.

use super::count::{marginal_options, signed_value, Realizer};
use super::{
    associated_tree, degree_one_elements, EdgeLabelling, PhyloElement, SplitTree,
};
use crate::exact::{cone_contains, Lattice};
use crate::graphs::{betti, Graph};
use crate::{check_modulus, Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Result of a membership test.
#[derive(Debug, Clone)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<MembershipWitness>,
}

/// A decomposition into degree-one labellings of the split tree. When
/// the graph is a tree the split is the identity and the labellings live
/// on the graph's own edges.
#[derive(Debug, Clone)]
pub struct MembershipWitness {
    pub split: SplitTree,
    pub labellings: Vec<EdgeLabelling>,
}

/// Per-inner-vertex count vectors read towards the vertex.
fn local_residuals(
    tree: &Graph,
    margs: &BTreeMap<String, Vec<u32>>,
    vertex: &str,
) -> Vec<Vec<u32>> {
    tree.incident_half_edges(vertex)
        .iter()
        .map(|&(edge_idx, slot)| {
            let e = &tree.edges()[edge_idx];
            let marg = &margs[&e.id];
            if slot == 0 {
                marg.clone()
            } else {
                super::reverse_counts(marg)
            }
        })
        .collect()
}

fn inner_vertices(tree: &Graph) -> Vec<String> {
    tree.vertices()
        .iter()
        .filter(|v| tree.degree(v) >= 2)
        .cloned()
        .collect()
}

/// True when every inner vertex of the tree admits a `d`-fold zero-sum
/// decomposition of its incident count vectors.
pub(crate) fn locally_feasible(
    tree: &Graph,
    margs: &BTreeMap<String, Vec<u32>>,
    d: u32,
    realizer: &mut Realizer,
) -> bool {
    inner_vertices(tree)
        .iter()
        .all(|v| realizer.feasible(&local_residuals(tree, margs, v), d))
}

/// Tests whether `x` is a sum of `x.degree` tree labellings with matching
/// split-pair aggregates; on success the witness lists the summands.
pub fn is_member(g: &Graph, m: u32, x: &PhyloElement) -> Result<Membership> {
    check_modulus(m)?;
    if x.m != m {
        return Err(Error::ModulusMismatch(m, x.m));
    }
    x.validate_on(g)?;
    let split = associated_tree(g)?;
    let margs = split.extend_marginals(x);
    let d = x.degree;
    let mut realizer = Realizer::new(m);
    if !locally_feasible(&split.tree, &margs, d, &mut realizer) {
        return Ok(Membership { member: false, witness: None });
    }
    let labellings = glue_witness(&split.tree, &margs, d, m, &mut realizer)?;
    debug_assert!(labellings.iter().all(|l| l.validate_on(&split.tree).is_ok()));
    if !sum_check(&labellings, &margs, m) {
        return Err(Error::Inconsistent(
            "witness labellings do not sum to the element".into(),
        ));
    }
    Ok(Membership {
        member: true,
        witness: Some(MembershipWitness { split, labellings }),
    })
}

/// Verifies that the witness labellings reproduce every tree-edge count
/// vector.
fn sum_check(labellings: &[EdgeLabelling], margs: &BTreeMap<String, Vec<u32>>, m: u32) -> bool {
    for (edge, marg) in margs {
        let mut counts = vec![0u32; (m - 1) as usize];
        for l in labellings {
            let a = l.label(edge);
            if a != 0 {
                counts[(a - 1) as usize] += 1;
            }
        }
        if counts != *marg {
            return false;
        }
    }
    true
}

/// Builds one decomposition: each inner vertex decomposes locally, then
/// rows are aligned over the tree by matching the label multiset on each
/// edge between two inner vertices.
fn glue_witness(
    tree: &Graph,
    margs: &BTreeMap<String, Vec<u32>>,
    d: u32,
    m: u32,
    realizer: &mut Realizer,
) -> Result<Vec<EdgeLabelling>> {
    let inner = inner_vertices(tree);
    // rows[v][t] maps each incident edge to the label of summand t, read
    // from the slot-0 side.
    let mut rows: BTreeMap<String, Vec<BTreeMap<String, u32>>> = BTreeMap::new();
    for v in &inner {
        let incident = tree.incident_half_edges(v);
        let residuals = local_residuals(tree, margs, v);
        let tuples = realizer
            .decompose(&residuals, d)
            .ok_or_else(|| Error::Inconsistent("feasible vertex failed to decompose".into()))?;
        let mut vrows = Vec::with_capacity(d as usize);
        for tuple in &tuples {
            let mut row = BTreeMap::new();
            for (pos, &(edge_idx, slot)) in incident.iter().enumerate() {
                let e = &tree.edges()[edge_idx];
                row.insert(e.id.clone(), signed_value(tuple[pos], slot, m));
            }
            vrows.push(row);
        }
        rows.insert(v.clone(), vrows);
    }
    // Align rows across inner vertices: breadth-first over edges whose
    // two endpoints are both inner.
    if let Some(root) = inner.first() {
        let mut fixed: BTreeSet<String> = BTreeSet::new();
        fixed.insert(root.clone());
        let mut queue = vec![root.clone()];
        while let Some(u) = queue.pop() {
            for (edge_idx, _) in tree.incident_half_edges(&u) {
                let e = &tree.edges()[edge_idx];
                let other = if e.ends[0] == u { &e.ends[1] } else { &e.ends[0] };
                if !rows.contains_key(other) || fixed.contains(other) {
                    continue;
                }
                let want: Vec<u32> = (0..d as usize).map(|t| rows[&u][t][&e.id]).collect();
                let wrows = rows.get_mut(other).expect("inner vertex has rows");
                let mut buckets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
                for (i, row) in wrows.iter().enumerate() {
                    buckets.entry(row[&e.id]).or_default().push(i);
                }
                let mut order = Vec::with_capacity(d as usize);
                for &a in &want {
                    let bucket = buckets.get_mut(&a).ok_or_else(|| {
                        Error::Inconsistent("edge multisets disagree while gluing".into())
                    })?;
                    order.push(bucket.pop().ok_or_else(|| {
                        Error::Inconsistent("edge multisets disagree while gluing".into())
                    })?);
                }
                let reordered: Vec<BTreeMap<String, u32>> =
                    order.iter().map(|&i| wrows[i].clone()).collect();
                *wrows = reordered;
                fixed.insert(other.clone());
                queue.push(other.clone());
            }
        }
    }
    // Assemble the labellings, reading each edge at an inner endpoint.
    let mut labellings = Vec::with_capacity(d as usize);
    for t in 0..d as usize {
        let mut labels = BTreeMap::new();
        for e in tree.edges() {
            let end0_inner = rows.contains_key(&e.ends[0]);
            let end1_inner = rows.contains_key(&e.ends[1]);
            let a = if end0_inner {
                rows[&e.ends[0]][t][&e.id]
            } else if end1_inner {
                rows[&e.ends[1]][t][&e.id]
            } else {
                0
            };
            if end0_inner && end1_inner {
                debug_assert_eq!(a, rows[&e.ends[1]][t][&e.id]);
            }
            labels.insert(e.id.clone(), a);
        }
        labellings.push(EdgeLabelling::new(m, labels)?);
    }
    Ok(labellings)
}

/// Brute-force enumeration of all degree-`d` elements: every multiset of
/// `d` tree labellings whose aggregates match across split pairs,
/// projected back to the graph. Independent of the counting DP.
pub fn enumerate_elements(g: &Graph, m: u32, d: u32) -> Result<Vec<PhyloElement>> {
    check_modulus(m)?;
    let split = associated_tree(g)?;
    let labellings = degree_one_elements(&split.tree, m)?;
    let mut seen: BTreeSet<PhyloElement> = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    collect_multisets(
        &split,
        &labellings,
        m,
        d,
        0,
        &mut chosen,
        &mut seen,
    )?;
    Ok(seen.into_iter().collect())
}

fn collect_multisets(
    split: &SplitTree,
    labellings: &[EdgeLabelling],
    m: u32,
    d: u32,
    from: usize,
    chosen: &mut Vec<usize>,
    seen: &mut BTreeSet<PhyloElement>,
) -> Result<()> {
    if chosen.len() == d as usize {
        if let Some(x) = project_matching(split, labellings, m, d, chosen)? {
            seen.insert(x);
        }
        return Ok(());
    }
    for i in from..labellings.len() {
        chosen.push(i);
        collect_multisets(split, labellings, m, d, i, chosen, seen)?;
        chosen.pop();
    }
    Ok(())
}

/// Projects a multiset of tree labellings to a graph element when the
/// aggregate count vectors of each split pair are mutual reversals.
fn project_matching(
    split: &SplitTree,
    labellings: &[EdgeLabelling],
    m: u32,
    d: u32,
    chosen: &[usize],
) -> Result<Option<PhyloElement>> {
    let width = (m - 1) as usize;
    let mut counts: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
    for &i in chosen {
        for (e, &a) in labellings[i].labels() {
            counts.entry(e.as_str()).or_insert_with(|| vec![0; width])[(a - 1) as usize] += 1;
        }
    }
    let zero = vec![0u32; width];
    for (h0, h1) in &split.pairs {
        let c0 = counts.get(h0.as_str()).unwrap_or(&zero);
        let c1 = counts.get(h1.as_str()).unwrap_or(&zero);
        if *c0 != super::reverse_counts(c1) {
            return Ok(None);
        }
    }
    let mut coords = BTreeMap::new();
    for (id, vec) in counts {
        let src = &split.origin[id];
        if id == src || id.ends_with("#0") {
            coords.insert(src.clone(), vec);
        }
    }
    Ok(Some(PhyloElement::new(m, d, coords)?))
}

/// Ungraded membership: is some degree-`d` element with these count
/// vectors in the semigroup, for any `d`? Returns the least such degree.
///
/// Any nonzero tree labelling has at least two nonzero labels, so a
/// decomposition needs at most `floor(total / 2)` nonzero summands where
/// `total` sums the tree-edge counts; adding zero labellings is always
/// allowed, so membership is monotone in the degree above that point and
/// the search range is finite.
pub fn in_rpr(g: &Graph, m: u32, coords: &BTreeMap<String, Vec<u32>>) -> Result<Option<u32>> {
    check_modulus(m)?;
    for (e, v) in coords {
        if g.edge(e).is_none() {
            return Err(Error::Validation(format!("edge {e:?} is not in the graph")));
        }
        if v.len() != (m - 1) as usize {
            return Err(Error::Validation(format!(
                "count vector on edge {e:?} has length {}, expected {}",
                v.len(),
                m - 1
            )));
        }
    }
    let split = associated_tree(g)?;
    let d_min = coords
        .values()
        .map(|v| v.iter().sum::<u32>())
        .max()
        .unwrap_or(0);
    // Tree-edge total: split edges count twice, once per half.
    let total: u32 = coords.values().map(|v| v.iter().sum::<u32>()).sum();
    let split_extra: u32 = split
        .pairs
        .iter()
        .map(|(h0, _)| {
            let src = &split.origin[h0];
            coords.get(src).map(|v| v.iter().sum::<u32>()).unwrap_or(0)
        })
        .sum();
    let d_max = (total + split_extra) / 2;
    if d_min == 0 {
        return Ok(Some(0));
    }
    if d_max < d_min {
        return Ok(None);
    }
    let mut realizer = Realizer::new(m);
    for d in d_min..=d_max {
        let x = PhyloElement::new(m, d, coords.clone())?;
        let margs = split.extend_marginals(&x);
        if locally_feasible(&split.tree, &margs, d, &mut realizer) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Degree-`d` lattice points of the cone over the semigroup that the
/// semigroup misses: an empty list certifies saturation at this degree.
///
/// The lattice and cone are generated from low-degree elements: degree
/// one suffices on trees, where every labelling is itself an element; on
/// graphs with cycles, elements of degree up to `max(d, betti + 1)` are
/// used.
pub fn saturation_gap(g: &Graph, m: u32, d: u32) -> Result<Vec<PhyloElement>> {
    check_modulus(m)?;
    let split = associated_tree(g)?;
    let b = betti(g);
    let tree_edge_ids: Vec<String> = {
        let mut ids: Vec<String> = split.tree.edges().iter().map(|e| e.id.clone()).collect();
        ids.sort();
        ids
    };
    let width = (m - 1) as usize;
    let dim = tree_edge_ids.len() * width + 1;
    let flatten = |margs: &BTreeMap<String, Vec<u32>>, degree: u32| -> Vec<i128> {
        let mut v = Vec::with_capacity(dim);
        for id in &tree_edge_ids {
            match margs.get(id) {
                Some(c) => v.extend(c.iter().map(|&x| x as i128)),
                None => v.extend(std::iter::repeat(0i128).take(width)),
            }
        }
        v.push(degree as i128);
        v
    };
    // Generators of the lattice and the cone.
    let mut generators: Vec<Vec<i128>> = Vec::new();
    let gen_bound = if b == 0 { 1 } else { (d.max(b as u32 + 1)).max(1) };
    for delta in 1..=gen_bound {
        if b == 0 && delta > 1 {
            break;
        }
        for x in enumerate_elements(g, m, delta)? {
            let margs = split.extend_marginals(&x);
            generators.push(flatten(&margs, delta));
        }
    }
    let lattice = Lattice::new(dim, &generators);
    let members: BTreeSet<PhyloElement> = enumerate_elements(g, m, d)?.into_iter().collect();
    // Sweep all candidate degree-d assignments of per-edge count vectors.
    let graph_edge_ids: Vec<String> = g.edges().iter().map(|e| e.id.clone()).collect();
    let options = marginal_options(m, d);
    let mut gaps = Vec::new();
    let mut pick = vec![0usize; graph_edge_ids.len()];
    loop {
        let mut coords = BTreeMap::new();
        for (k, id) in graph_edge_ids.iter().enumerate() {
            let v = &options[pick[k]];
            if v.iter().any(|&c| c != 0) {
                coords.insert(id.clone(), v.clone());
            }
        }
        let x = PhyloElement::new(m, d, coords)?;
        if !members.contains(&x) {
            let margs = split.extend_marginals(&x);
            let target = flatten(&margs, d);
            if lattice.contains(&target) && cone_contains(&generators, &target) {
                gaps.push(x);
            }
        }
        let mut k = 0;
        loop {
            if k == graph_edge_ids.len() {
                gaps.sort();
                return Ok(gaps);
            }
            pick[k] += 1;
            if pick[k] < options.len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}
