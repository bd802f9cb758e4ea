//! Edge labellings of graphs by `Z/mZ` and the graded semigroup they
//! span.
//!
//! A degree-one element is a labelling of the edges by residues mod `m`
//! whose signed sum at every non-leaf vertex vanishes: an edge contributes
//! its label at its slot-0 endpoint and the negated label at its slot-1
//! endpoint, so a loop contributes zero. A degree-`d` element of the
//! semigroup attached to a graph with cycles is a sum of `d` labellings of
//! the associated split tree whose aggregated counts on the two halves of
//! each split edge are negatives of each other; the individual summands
//! need not match, only the total. Elements are recorded as
//! [`PhyloElement`]: per-edge count vectors that forget the multiplicity
//! of the zero residue.

mod count;
mod member;

pub use count::hilbert_value;
pub use member::{enumerate_elements, in_rpr, is_member, saturation_gap, Membership, MembershipWitness};

use crate::graphs::{Edge, EdgeId, Graph};
use crate::{check_modulus, Error, Result};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// A residue modulo `m >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Residue {
    value: u32,
    modulus: u32,
}

impl Residue {
    pub fn new(value: u32, modulus: u32) -> Result<Residue> {
        check_modulus(modulus)?;
        Ok(Residue { value: value % modulus, modulus })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn neg(&self) -> Residue {
        Residue {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn add(&self, other: &Residue) -> Result<Residue> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(Residue {
            value: (self.value + other.value) % self.modulus,
            modulus: self.modulus,
        })
    }
}

/// Negation of a plain residue value.
pub(crate) fn neg_mod(value: u32, m: u32) -> u32 {
    (m - value % m) % m
}

/// A labelling of graph edges by residues mod `m`, stored at the slot-0
/// side of each edge. Zero labels are omitted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeLabelling {
    pub m: u32,
    labels: BTreeMap<EdgeId, u32>,
}

impl EdgeLabelling {
    /// Builds a labelling, dropping explicit zeros. Values must lie below
    /// `m`.
    pub fn new(m: u32, labels: BTreeMap<EdgeId, u32>) -> Result<EdgeLabelling> {
        check_modulus(m)?;
        for (e, &v) in &labels {
            if v >= m {
                return Err(Error::Validation(format!(
                    "label {v} on edge {e:?} is not a residue mod {m}"
                )));
            }
        }
        Ok(EdgeLabelling {
            m,
            labels: labels.into_iter().filter(|&(_, v)| v != 0).collect(),
        })
    }

    /// The all-zero labelling.
    pub fn zero(m: u32) -> EdgeLabelling {
        EdgeLabelling { m, labels: BTreeMap::new() }
    }

    /// The label on `edge`, zero when absent.
    pub fn label(&self, edge: &str) -> u32 {
        self.labels.get(edge).copied().unwrap_or(0)
    }

    /// Nonzero labels in edge-id order.
    pub fn labels(&self) -> &BTreeMap<EdgeId, u32> {
        &self.labels
    }

    /// The label of `edge` as seen from the endpoint in `slot`: the stored
    /// value at slot 0, its negative at slot 1.
    pub fn label_at(&self, edge: &str, slot: usize) -> u32 {
        let v = self.label(edge);
        if slot == 0 {
            v
        } else {
            neg_mod(v, self.m)
        }
    }

    /// Checks that all labelled edges exist in `graph` and that the signed
    /// sum at every non-leaf vertex vanishes.
    pub fn validate_on(&self, graph: &Graph) -> Result<()> {
        for e in self.labels.keys() {
            if graph.edge(e).is_none() {
                return Err(Error::Validation(format!("labelled edge {e:?} is not in the graph")));
            }
        }
        for v in graph.non_leaf_vertices() {
            let mut sum = 0u32;
            for (edge_idx, slot) in graph.incident_half_edges(v) {
                sum = (sum + self.label_at(&graph.edges()[edge_idx].id, slot)) % self.m;
            }
            if sum != 0 {
                return Err(Error::Validation(format!(
                    "labels at vertex {v:?} sum to {sum}, not 0 mod {}",
                    self.m
                )));
            }
        }
        Ok(())
    }

    /// The labelling with every label negated. Vertex sums negate too, so
    /// validity is preserved.
    pub fn negate(&self) -> EdgeLabelling {
        EdgeLabelling {
            m: self.m,
            labels: self
                .labels
                .iter()
                .map(|(e, &v)| (e.clone(), neg_mod(v, self.m)))
                .collect(),
        }
    }

    /// The degree-one semigroup element with this labelling's counts.
    pub fn to_element(&self) -> PhyloElement {
        let mut coords = BTreeMap::new();
        for (e, &v) in &self.labels {
            let mut vec = vec![0u32; (self.m - 1) as usize];
            vec[(v - 1) as usize] = 1;
            coords.insert(e.clone(), vec);
        }
        PhyloElement { m: self.m, degree: 1, coords }
    }

    pub fn to_json(&self) -> Value {
        let mut labels = Map::new();
        for (e, &v) in &self.labels {
            labels.insert(e.clone(), json!(v));
        }
        json!({ "labels": labels })
    }

    pub fn from_json(v: &Value, m: u32) -> Result<EdgeLabelling> {
        let obj = v
            .as_object()
            .and_then(|o| o.get("labels"))
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Json("labelling needs a \"labels\" object".into()))?;
        let mut labels = BTreeMap::new();
        for (e, raw) in obj {
            let val = raw
                .as_u64()
                .ok_or_else(|| Error::Json(format!("label of {e:?} must be a nonnegative integer")))?;
            labels.insert(e.clone(), u32::try_from(val).map_err(|_| Error::Json("label out of range".into()))?);
        }
        EdgeLabelling::new(m, labels)
    }
}

/// A graded semigroup element: per-edge counts of nonzero residues.
///
/// `coords[e][a-1]` counts how many of the `degree` summands label edge
/// `e` with residue `a`; the multiplicity of residue zero is the slack
/// `degree - sum(coords[e])`. Edges with all-zero count vectors are
/// omitted. Membership in the semigroup is a property checked by
/// [`is_member`], not enforced here.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PhyloElement {
    pub m: u32,
    pub degree: u32,
    coords: BTreeMap<EdgeId, Vec<u32>>,
}

impl PhyloElement {
    /// Builds an element, dropping all-zero vectors. Every stored vector
    /// must have length `m - 1` and sum at most `degree`.
    pub fn new(m: u32, degree: u32, coords: BTreeMap<EdgeId, Vec<u32>>) -> Result<PhyloElement> {
        check_modulus(m)?;
        for (e, vec) in &coords {
            if vec.len() != (m - 1) as usize {
                return Err(Error::Validation(format!(
                    "count vector on edge {e:?} has length {}, expected {}",
                    vec.len(),
                    m - 1
                )));
            }
            let s: u32 = vec.iter().sum();
            if s > degree {
                return Err(Error::Validation(format!(
                    "counts on edge {e:?} sum to {s}, above the degree {degree}"
                )));
            }
        }
        Ok(PhyloElement {
            m,
            degree,
            coords: coords.into_iter().filter(|(_, v)| v.iter().any(|&x| x != 0)).collect(),
        })
    }

    /// The zero element at the given degree.
    pub fn zero(m: u32, degree: u32) -> PhyloElement {
        PhyloElement { m, degree, coords: BTreeMap::new() }
    }

    /// The count vector of `edge`; all zeros when absent.
    pub fn marginal(&self, edge: &str) -> Vec<u32> {
        self.coords
            .get(edge)
            .cloned()
            .unwrap_or_else(|| vec![0; (self.m - 1) as usize])
    }

    /// Nonzero count vectors in edge-id order.
    pub fn coords(&self) -> &BTreeMap<EdgeId, Vec<u32>> {
        &self.coords
    }

    /// Checks that all edges referenced exist in `graph`.
    pub fn validate_on(&self, graph: &Graph) -> Result<()> {
        for e in self.coords.keys() {
            if graph.edge(e).is_none() {
                return Err(Error::Validation(format!("edge {e:?} is not in the graph")));
            }
        }
        Ok(())
    }

    /// Sum of two elements: degrees add, count vectors add.
    pub fn add(&self, other: &PhyloElement) -> Result<PhyloElement> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch(self.m, other.m));
        }
        let mut coords = self.coords.clone();
        for (e, vec) in &other.coords {
            let entry = coords.entry(e.clone()).or_insert_with(|| vec![0; (self.m - 1) as usize]);
            for (a, b) in entry.iter_mut().zip(vec) {
                *a += b;
            }
        }
        Ok(PhyloElement {
            m: self.m,
            degree: self.degree + other.degree,
            coords,
        })
    }

    /// Total number of nonzero labels across all edges.
    pub fn support_size(&self) -> u32 {
        self.coords.values().flat_map(|v| v.iter()).sum()
    }

    pub fn to_json(&self) -> Value {
        let mut coords = Map::new();
        for (e, vec) in &self.coords {
            coords.insert(e.clone(), json!(vec));
        }
        json!({ "degree": self.degree, "coords": coords })
    }

    pub fn from_json(v: &Value, m: u32) -> Result<PhyloElement> {
        let obj = v.as_object().ok_or_else(|| Error::Json("element must be an object".into()))?;
        let degree = obj
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("element needs a numeric \"degree\"".into()))?;
        let degree = u32::try_from(degree).map_err(|_| Error::Json("degree out of range".into()))?;
        let mut coords = BTreeMap::new();
        if let Some(raw) = obj.get("coords") {
            let raw = raw
                .as_object()
                .ok_or_else(|| Error::Json("\"coords\" must map edge ids to count vectors".into()))?;
            for (e, vec) in raw {
                let vec = vec
                    .as_array()
                    .ok_or_else(|| Error::Json(format!("counts of {e:?} must be an array")))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .and_then(|n| u32::try_from(n).ok())
                            .ok_or_else(|| Error::Json(format!("bad count in {e:?}")))
                    })
                    .collect::<Result<Vec<u32>>>()?;
                coords.insert(e.clone(), vec);
            }
        }
        PhyloElement::new(m, degree, coords)
    }
}

/// A graph cut open along a canonical set of cycle edges. Non-spanning
/// edges (loops included) are split into paired leaf halves `e#0`, `e#1`;
/// the result is a tree whenever the source graph is connected.
#[derive(Debug, Clone)]
pub struct SplitTree {
    pub tree: Graph,
    /// Ordered pairs `(e#0, e#1)`, one per split edge, in source edge
    /// order.
    pub pairs: Vec<(EdgeId, EdgeId)>,
    /// Maps every tree edge back to its source edge.
    pub origin: BTreeMap<EdgeId, EdgeId>,
}

/// Splits a canonical set of `betti(g)` cycle edges of a connected graph:
/// edges are scanned in construction order and an edge whose endpoints are
/// already connected by earlier edges is cut.
pub fn associated_tree(g: &Graph) -> Result<SplitTree> {
    if !g.is_connected() {
        return Err(Error::Validation("associated tree requires a connected graph".into()));
    }
    let mut comp: BTreeMap<&str, usize> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let mut vertices: Vec<String> = g.vertices().to_vec();
    let mut edges: Vec<Edge> = Vec::new();
    let mut pairs = Vec::new();
    let mut origin = BTreeMap::new();
    for e in g.edges() {
        let c0 = comp[e.ends[0].as_str()];
        let c1 = comp[e.ends[1].as_str()];
        if c0 != c1 {
            // Joins two components: keep, merge.
            for c in comp.values_mut() {
                if *c == c1 {
                    *c = c0;
                }
            }
            edges.push(e.clone());
            origin.insert(e.id.clone(), e.id.clone());
        } else {
            // Closes a cycle (loops always do): split.
            let half_ids = [format!("{}#0", e.id), format!("{}#1", e.id)];
            for slot in 0..2 {
                let tip = format!("{}#{slot}v", e.id);
                vertices.push(tip.clone());
                edges.push(Edge {
                    id: half_ids[slot].clone(),
                    ends: [e.ends[slot].clone(), tip],
                });
                origin.insert(half_ids[slot].clone(), e.id.clone());
            }
            pairs.push((half_ids[0].clone(), half_ids[1].clone()));
        }
    }
    let tree = Graph::new(vertices, edges)?;
    debug_assert_eq!(crate::graphs::betti(&tree), 0);
    Ok(SplitTree { tree, pairs, origin })
}

impl SplitTree {
    /// True when nothing was split: the source was already a tree.
    pub fn is_identity(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Extends a source-graph element to count vectors on every tree
    /// edge: kept edges carry their own vector, the two halves of a split
    /// edge carry the vector and its reversal.
    pub fn extend_marginals(&self, x: &PhyloElement) -> BTreeMap<EdgeId, Vec<u32>> {
        let mut out = BTreeMap::new();
        for e in self.tree.edges() {
            let src = &self.origin[&e.id];
            let marg = x.marginal(src);
            if e.id == *src || e.id.ends_with("#0") {
                out.insert(e.id.clone(), marg);
            } else {
                out.insert(e.id.clone(), reverse_counts(&marg));
            }
        }
        out
    }

    /// Projects tree-edge count vectors back to a source-graph element,
    /// reading each split edge at its slot-0 half.
    pub fn project_element(&self, m: u32, degree: u32, tree_marginals: &BTreeMap<EdgeId, Vec<u32>>) -> Result<PhyloElement> {
        let mut coords = BTreeMap::new();
        for (id, marg) in tree_marginals {
            let src = &self.origin[id];
            if id == src || id.ends_with("#0") {
                coords.insert(src.clone(), marg.clone());
            }
        }
        PhyloElement::new(m, degree, coords)
    }
}

/// Reversal of a count vector: counts of residue `a` and `m - a` swap.
/// This is the count vector of the negated multiset of labels.
pub(crate) fn reverse_counts(v: &[u32]) -> Vec<u32> {
    let mut r = v.to_vec();
    r.reverse();
    r
}

/// All degree-one elements of the tripod semigroup: labellings of the
/// three tripod edges `e1`, `e2`, `e3` summing to zero mod `m`, as
/// degree-one elements. There are exactly `m^2`: the zero labelling, the
/// two-edge (pair) labellings, and the three-edge (triple) labellings, in
/// that order.
pub fn tripod_vertices(m: u32) -> Result<Vec<PhyloElement>> {
    check_modulus(m)?;
    let mk = |a1: u32, a2: u32, a3: u32| {
        let mut labels = BTreeMap::new();
        for (e, v) in [("e1", a1), ("e2", a2), ("e3", a3)] {
            labels.insert(e.to_string(), v);
        }
        EdgeLabelling::new(m, labels).expect("labels below m").to_element()
    };
    let mut out = vec![PhyloElement::zero(m, 1)];
    // Pairs: one edge zero, the other two dual.
    for (i, j, k) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
        for a in 1..m {
            let mut t = [0u32; 3];
            t[i] = a;
            t[j] = m - a;
            t[k] = 0;
            out.push(mk(t[0], t[1], t[2]));
        }
    }
    // Triples: all three nonzero.
    for a1 in 1..m {
        for a2 in 1..m {
            let a3 = neg_mod(a1 + a2, m);
            if a3 != 0 {
                out.push(mk(a1, a2, a3));
            }
        }
    }
    debug_assert_eq!(out.len(), (m * m) as usize);
    Ok(out)
}

/// All labellings of a connected graph's edges by residues mod `m` with
/// vanishing signed sums at non-leaf vertices, in lexicographic label
/// order along the edge list.
pub fn degree_one_elements(g: &Graph, m: u32) -> Result<Vec<EdgeLabelling>> {
    check_modulus(m)?;
    if !g.is_connected() {
        return Err(Error::Validation("degree-one enumeration requires a connected graph".into()));
    }
    let edges = g.edges();
    // For pruning: after assigning edge k, vertices whose incident edges
    // all have index <= k can be checked.
    let inner: Vec<&String> = g.non_leaf_vertices();
    let mut last_edge_of_vertex: Vec<usize> = Vec::new();
    let mut half_edges_of_vertex: Vec<Vec<(usize, usize)>> = Vec::new();
    for v in &inner {
        let he = g.incident_half_edges(v);
        last_edge_of_vertex.push(he.iter().map(|&(i, _)| i).max().unwrap_or(0));
        half_edges_of_vertex.push(he);
    }
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for (vi, &last) in last_edge_of_vertex.iter().enumerate() {
        check_at[last].push(vi);
    }
    let mut out = Vec::new();
    let mut labels = vec![0u32; edges.len()];
    fn rec(
        k: usize,
        m: u32,
        edges: &[Edge],
        labels: &mut Vec<u32>,
        check_at: &[Vec<usize>],
        half_edges_of_vertex: &[Vec<(usize, usize)>],
        out: &mut Vec<EdgeLabelling>,
    ) {
        if k == edges.len() {
            let map: BTreeMap<EdgeId, u32> = edges
                .iter()
                .zip(labels.iter())
                .filter(|&(_, &v)| v != 0)
                .map(|(e, &v)| (e.id.clone(), v))
                .collect();
            out.push(EdgeLabelling { m, labels: map });
            return;
        }
        for v in 0..m {
            labels[k] = v;
            let ok = check_at[k].iter().all(|&vi| {
                let sum: u32 = half_edges_of_vertex[vi]
                    .iter()
                    .map(|&(i, slot)| if slot == 0 { labels[i] } else { (m - labels[i]) % m })
                    .sum();
                sum % m == 0
            });
            if ok {
                rec(k + 1, m, edges, labels, check_at, half_edges_of_vertex, out);
            }
        }
        labels[k] = 0;
    }
    rec(0, m, edges, &mut labels, &check_at, &half_edges_of_vertex, &mut out);
    Ok(out)
}

/// Convenience: the negation of a labelling. See
/// [`EdgeLabelling::negate`].
pub fn negate(l: &EdgeLabelling) -> EdgeLabelling {
    l.negate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::make_gamma_gn;
    use std::collections::BTreeSet;

    #[test]
    fn residue_arithmetic() {
        let a = Residue::new(3, 5).unwrap();
        let b = Residue::new(4, 5).unwrap();
        assert_eq!(a.add(&b).unwrap().value(), 2);
        assert_eq!(a.neg().value(), 2);
        assert_eq!(Residue::new(0, 5).unwrap().neg().value(), 0);
        assert!(Residue::new(1, 1).is_err());
    }

    #[test]
    fn tripod_vertices_m2() {
        let vs = tripod_vertices(2).unwrap();
        assert_eq!(vs.len(), 4);
        let as_triples: Vec<(u32, u32, u32)> = vs
            .iter()
            .map(|e| {
                (
                    e.marginal("e1")[0],
                    e.marginal("e2")[0],
                    e.marginal("e3")[0],
                )
            })
            .collect();
        assert_eq!(as_triples, vec![(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)]);
    }

    #[test]
    fn tripod_vertices_counts() {
        for m in 2..=6 {
            let vs = tripod_vertices(m).unwrap();
            assert_eq!(vs.len(), (m * m) as usize, "m = {m}");
            // All distinct.
            let set: BTreeSet<_> = vs.iter().collect();
            assert_eq!(set.len(), vs.len());
            // Each is a valid labelling: the three labels sum to 0 mod m.
            for v in &vs {
                let total: u32 = ["e1", "e2", "e3"]
                    .iter()
                    .map(|e| {
                        v.marginal(e)
                            .iter()
                            .enumerate()
                            .map(|(i, &c)| c * (i as u32 + 1))
                            .sum::<u32>()
                    })
                    .sum();
                assert_eq!(total % m, 0);
                assert_eq!(v.degree, 1);
            }
        }
    }

    #[test]
    fn tripod_vertices_m3_members() {
        let vs = tripod_vertices(3).unwrap();
        let triples: BTreeSet<(u32, u32, u32)> = vs
            .iter()
            .map(|e| {
                let lab = |edge: &str| {
                    let m = e.marginal(edge);
                    if m[0] == 1 {
                        1
                    } else if m[1] == 1 {
                        2
                    } else {
                        0
                    }
                };
                (lab("e1"), lab("e2"), lab("e3"))
            })
            .collect();
        let expected: BTreeSet<(u32, u32, u32)> = [
            (0, 0, 0),
            (1, 2, 0),
            (2, 1, 0),
            (1, 0, 2),
            (2, 0, 1),
            (0, 1, 2),
            (0, 2, 1),
            (1, 1, 1),
            (2, 2, 2),
        ]
        .into_iter()
        .collect();
        assert_eq!(triples, expected);
    }

    #[test]
    fn degree_one_count_formula() {
        // Connected trivalent graphs with n >= 1 leaves have exactly
        // m^(g + n - 1) degree-one labellings.
        for (g, n) in [(0usize, 3usize), (0, 4), (1, 1), (1, 2), (2, 2)] {
            let graph = make_gamma_gn(g, n).unwrap();
            for m in 2u32..=4 {
                let count = degree_one_elements(&graph, m).unwrap().len();
                assert_eq!(
                    count,
                    m.pow((g + n - 1) as u32) as usize,
                    "type ({g},{n}), m = {m}"
                );
            }
        }
    }

    #[test]
    fn degree_one_all_valid() {
        let graph = make_gamma_gn(1, 2).unwrap();
        for l in degree_one_elements(&graph, 3).unwrap() {
            l.validate_on(&graph).unwrap();
        }
    }

    #[test]
    fn degree_one_loops_unconstrained() {
        // Single vertex with a loop and a leaf: the leaf label is forced
        // to zero, the loop label is free.
        let graph = make_gamma_gn(1, 1).unwrap();
        let ls = degree_one_elements(&graph, 3).unwrap();
        assert_eq!(ls.len(), 3);
        for l in &ls {
            assert_eq!(l.label("leaf0"), 0);
        }
        let loop_labels: BTreeSet<u32> = ls.iter().map(|l| l.label("loop0")).collect();
        assert_eq!(loop_labels, BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn negate_is_involution_and_valid() {
        let graph = make_gamma_gn(0, 4).unwrap();
        for l in degree_one_elements(&graph, 5).unwrap() {
            let n = negate(&l);
            n.validate_on(&graph).unwrap();
            assert_eq!(negate(&n), l);
        }
    }

    #[test]
    fn negate_m2_is_identity() {
        let graph = Graph::tripod();
        for l in degree_one_elements(&graph, 2).unwrap() {
            assert_eq!(negate(&l), l);
        }
    }

    #[test]
    fn associated_tree_of_tree_is_identity() {
        let t = Graph::tripod();
        let st = associated_tree(&t).unwrap();
        assert!(st.is_identity());
        assert_eq!(st.tree, t);
    }

    #[test]
    fn associated_tree_splits_cycles() {
        let g = make_gamma_gn(1, 1).unwrap();
        let st = associated_tree(&g).unwrap();
        assert_eq!(st.pairs.len(), 1);
        assert_eq!(st.pairs[0], ("loop0#0".to_string(), "loop0#1".to_string()));
        assert_eq!(crate::graphs::betti(&st.tree), 0);
        assert_eq!(st.tree.leaf_edges().len(), 3);

        let g2 = make_gamma_gn(2, 2).unwrap();
        let st2 = associated_tree(&g2).unwrap();
        assert_eq!(st2.pairs.len(), 2);
        assert_eq!(crate::graphs::betti(&st2.tree), 0);
    }

    #[test]
    fn extend_and_project_marginals() {
        let g = make_gamma_gn(1, 1).unwrap();
        let st = associated_tree(&g).unwrap();
        let x = PhyloElement::new(
            3,
            2,
            BTreeMap::from([("loop0".to_string(), vec![1, 0])]),
        )
        .unwrap();
        let ext = st.extend_marginals(&x);
        assert_eq!(ext["loop0#0"], vec![1, 0]);
        assert_eq!(ext["loop0#1"], vec![0, 1], "reversed on the far half");
        assert_eq!(ext["leaf0"], vec![0, 0]);
        let back = st.project_element(3, 2, &ext).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn element_json_round_trip() {
        let x = PhyloElement::new(
            4,
            2,
            BTreeMap::from([
                ("e1".to_string(), vec![1, 0, 1]),
                ("e2".to_string(), vec![0, 1, 0]),
            ]),
        )
        .unwrap();
        let j = x.to_json();
        assert_eq!(PhyloElement::from_json(&j, 4).unwrap(), x);
        // Omitted coords mean zero.
        let z = PhyloElement::from_json(&json!({"degree": 3}), 4).unwrap();
        assert_eq!(z, PhyloElement::zero(4, 3));
    }

    #[test]
    fn element_rejects_bad_shapes() {
        assert!(PhyloElement::new(3, 1, BTreeMap::from([("e".to_string(), vec![1])])).is_err());
        assert!(PhyloElement::new(3, 1, BTreeMap::from([("e".to_string(), vec![1, 1])])).is_err());
    }

    #[test]
    fn labelling_json_round_trip() {
        let l = EdgeLabelling::new(
            5,
            BTreeMap::from([("a".to_string(), 2), ("b".to_string(), 3), ("c".to_string(), 0)]),
        )
        .unwrap();
        let j = l.to_json();
        let back = EdgeLabelling::from_json(&j, 5).unwrap();
        assert_eq!(back, l);
        assert_eq!(back.label("c"), 0);
    }

    #[test]
    fn labelling_rejects_out_of_range() {
        assert!(EdgeLabelling::new(3, BTreeMap::from([("a".to_string(), 3)])).is_err());
    }

    #[test]
    fn to_element_unit_vectors() {
        let l = EdgeLabelling::new(3, BTreeMap::from([("a".to_string(), 2)])).unwrap();
        let e = l.to_element();
        assert_eq!(e.degree, 1);
        assert_eq!(e.marginal("a"), vec![0, 1]);
        assert_eq!(e.marginal("b"), vec![0, 0]);
    }
}
