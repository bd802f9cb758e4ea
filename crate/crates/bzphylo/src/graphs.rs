//! Finite connected multigraphs with distinguished leaf edges.
//!
//! Graphs here allow loops and parallel edges. A vertex of degree one is a
//! leaf vertex; an edge incident to a leaf vertex is a leaf edge. The type
//! of a connected graph is the pair `(g, n)` where `g` is the first Betti
//! number and `n` the number of leaf edges. Every edge carries two ordered
//! endpoint slots; a loop occupies both slots at the same vertex but the
//! slots stay distinct. Labellings in [`crate::cyclic`] are read from
//! slot 0, so the slot order fixes an orientation of each edge.

use crate::{Error, Result};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Vertex identifier. Plain strings keep the JSON interface direct.
pub type VertexId = String;
/// Edge identifier.
pub type EdgeId = String;

/// An edge with ordered endpoints. `ends[0]` is the slot-0 endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: [VertexId; 2],
}

impl Edge {
    /// True when both endpoints coincide.
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

/// A connected multigraph with loops, parallel edges, and distinguished
/// leaf edges. Construction validates the leaf-edge invariant: an edge is
/// a leaf edge exactly when it has exactly one endpoint of degree one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    leaf_edges: BTreeSet<EdgeId>,
    edge_index: BTreeMap<EdgeId, usize>,
}

impl Graph {
    /// Builds a graph from vertices and edges, deriving the leaf edges.
    ///
    /// Fails when edge ids repeat, an endpoint is missing from the vertex
    /// list, a loop sits at a degree-two vertex (which would make both its
    /// slots "leaves"), or the graph is empty.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = Edge>,
    {
        let vset: BTreeSet<VertexId> = vertices.into_iter().collect();
        if vset.is_empty() {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let edges: Vec<Edge> = edges.into_iter().collect();
        let mut edge_index = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge id {:?}", e.id)));
            }
            for v in &e.ends {
                if !vset.contains(v) {
                    return Err(Error::InvalidGraph(format!(
                        "edge {:?} references unknown vertex {:?}",
                        e.id, v
                    )));
                }
            }
        }
        let mut degree: BTreeMap<&VertexId, usize> = BTreeMap::new();
        for e in &edges {
            *degree.entry(&e.ends[0]).or_insert(0) += 1;
            *degree.entry(&e.ends[1]).or_insert(0) += 1;
        }
        let mut leaf_edges = BTreeSet::new();
        for e in &edges {
            let d0 = degree.get(&e.ends[0]).copied().unwrap_or(0);
            let d1 = degree.get(&e.ends[1]).copied().unwrap_or(0);
            if e.is_loop() {
                if d0 == 2 {
                    return Err(Error::InvalidGraph(format!(
                        "loop {:?} is the only edge at vertex {:?}",
                        e.id, e.ends[0]
                    )));
                }
                continue;
            }
            match (d0 == 1, d1 == 1) {
                (true, true) => {
                    return Err(Error::InvalidGraph(format!(
                        "edge {:?} joins two degree-one vertices",
                        e.id
                    )))
                }
                (false, false) => {}
                _ => {
                    leaf_edges.insert(e.id.clone());
                }
            }
        }
        Ok(Graph {
            vertices: vset.into_iter().collect(),
            edges,
            leaf_edges,
            edge_index,
        })
    }

    /// Sorted vertex ids.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges in construction order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Looks up an edge by id.
    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edge_index.get(id).map(|&i| &self.edges[i])
    }

    /// The distinguished leaf edges, sorted by id.
    pub fn leaf_edges(&self) -> &BTreeSet<EdgeId> {
        &self.leaf_edges
    }

    /// Edges that are not leaf edges, in construction order.
    pub fn internal_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| !self.leaf_edges.contains(&e.id))
    }

    /// Degree of a vertex; loops count twice.
    pub fn degree(&self, v: &str) -> usize {
        self.edges
            .iter()
            .map(|e| {
                (e.ends[0] == v) as usize + (e.ends[1] == v) as usize
            })
            .sum()
    }

    /// True when `v` has degree one.
    pub fn is_leaf_vertex(&self, v: &str) -> bool {
        self.degree(v) == 1
    }

    /// Vertices of degree at least two, sorted.
    pub fn non_leaf_vertices(&self) -> Vec<&VertexId> {
        self.vertices.iter().filter(|v| !self.is_leaf_vertex(v)).collect()
    }

    /// Half-edges at `v` as `(edge index, slot)`, sorted by edge id then
    /// slot. A loop at `v` contributes both slots.
    pub fn incident_half_edges(&self, v: &str) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for slot in 0..2 {
                if e.ends[slot] == v {
                    out.push((i, slot));
                }
            }
        }
        out.sort_by(|a, b| (&self.edges[a.0].id, a.1).cmp(&(&self.edges[b.0].id, b.1)));
        out
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let index: BTreeMap<&VertexId, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut seen = vec![false; self.vertices.len()];
        let mut count = 0;
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                for e in &self.edges {
                    for (a, b) in [(0, 1), (1, 0)] {
                        if index[&e.ends[a]] == u {
                            let w = index[&e.ends[b]];
                            if !seen[w] {
                                seen[w] = true;
                                queue.push_back(w);
                            }
                        }
                    }
                }
            }
        }
        count
    }

    /// True when the graph is connected.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// True when every non-leaf vertex has degree exactly three.
    pub fn is_trivalent(&self) -> bool {
        self.vertices.iter().all(|v| {
            let d = self.degree(v);
            d == 1 || d == 3
        })
    }

    /// The canonical tripod: one center `c`, leaf edges `e1`, `e2`, `e3`.
    pub fn tripod() -> Graph {
        let mk = |id: &str, leaf: &str| Edge {
            id: id.into(),
            ends: ["c".into(), leaf.into()],
        };
        Graph::new(
            ["c".into(), "l1".into(), "l2".into(), "l3".into()],
            [mk("e1", "l1"), mk("e2", "l2"), mk("e3", "l3")],
        )
        .expect("tripod is a valid graph")
    }

    /// Serializes to the canonical JSON form.
    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|e| json!({
                "id": e.id,
                "ends": [e.ends[0], e.ends[1]],
            })).collect::<Vec<_>>(),
            "leaf_edges": self.leaf_edges.iter().collect::<Vec<_>>(),
        })
    }

    /// Parses the canonical JSON form. A present `leaf_edges` field must
    /// agree with the derived leaf-edge set.
    pub fn from_json(v: &Value) -> Result<Graph> {
        let obj = v.as_object().ok_or_else(|| Error::Json("graph must be an object".into()))?;
        let vertices: Vec<VertexId> = as_string_array(obj.get("vertices"), "vertices")?;
        let edges_raw = obj
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("graph needs an \"edges\" array".into()))?;
        let mut edges = Vec::with_capacity(edges_raw.len());
        for e in edges_raw {
            let eo = e.as_object().ok_or_else(|| Error::Json("edge must be an object".into()))?;
            let id = eo
                .get("id")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Json("edge needs a string \"id\"".into()))?;
            let ends = as_string_array(eo.get("ends"), "ends")?;
            if ends.len() != 2 {
                return Err(Error::Json(format!("edge {id:?} needs exactly two ends")));
            }
            edges.push(Edge {
                id: id.to_string(),
                ends: [ends[0].clone(), ends[1].clone()],
            });
        }
        let g = Graph::new(vertices, edges)?;
        if let Some(claimed) = obj.get("leaf_edges") {
            let claimed: BTreeSet<EdgeId> = as_string_array(Some(claimed), "leaf_edges")?.into_iter().collect();
            if claimed != g.leaf_edges {
                return Err(Error::Json(format!(
                    "leaf_edges {:?} disagree with the derived set {:?}",
                    claimed, g.leaf_edges
                )));
            }
        }
        Ok(g)
    }
}

fn as_string_array(v: Option<&Value>, field: &str) -> Result<Vec<String>> {
    v.and_then(Value::as_array)
        .ok_or_else(|| Error::Json(format!("expected a string array for {field:?}")))?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Json(format!("expected strings in {field:?}")))
        })
        .collect()
}

/// First Betti number `|E| - |V| + #components`.
pub fn betti(g: &Graph) -> usize {
    g.edges().len() + g.component_count() - g.vertices().len()
}

/// The covering forest of a graph: every internal edge `e` is cut into two
/// leaf edges `e#0` (keeping the slot-0 endpoint) and `e#1` (keeping the
/// slot-1 endpoint), each ending in a fresh leaf vertex. The two halves are
/// recorded in `pairing`; `origin` maps every forest edge back to its
/// source edge.
#[derive(Debug, Clone)]
pub struct CoveringForest {
    pub forest: Graph,
    pub pairing: BTreeMap<EdgeId, EdgeId>,
    pub origin: BTreeMap<EdgeId, EdgeId>,
}

/// Splits every internal edge, producing the covering forest.
pub fn covering_forest(g: &Graph) -> Result<CoveringForest> {
    let mut vertices: Vec<VertexId> = g.vertices().to_vec();
    let mut edges = Vec::new();
    let mut pairing = BTreeMap::new();
    let mut origin = BTreeMap::new();
    for e in g.edges() {
        if g.leaf_edges().contains(&e.id) {
            edges.push(e.clone());
            origin.insert(e.id.clone(), e.id.clone());
            continue;
        }
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
        pairing.insert(half_ids[0].clone(), half_ids[1].clone());
        pairing.insert(half_ids[1].clone(), half_ids[0].clone());
    }
    let forest = Graph::new(vertices, edges)?;
    Ok(CoveringForest { forest, pairing, origin })
}

impl CoveringForest {
    /// Re-glues the paired halves, reconstructing the source graph exactly:
    /// same ids, same edge order, same endpoint slots.
    pub fn reglue(&self) -> Result<Graph> {
        let mut vertices: BTreeSet<VertexId> = BTreeSet::new();
        let mut edges = Vec::new();
        let mut done: BTreeSet<&EdgeId> = BTreeSet::new();
        for e in self.forest.edges() {
            if done.contains(&e.id) {
                continue;
            }
            match self.pairing.get(&e.id) {
                None => {
                    vertices.insert(e.ends[0].clone());
                    vertices.insert(e.ends[1].clone());
                    edges.push(e.clone());
                }
                Some(partner_id) => {
                    let partner = self
                        .forest
                        .edge(partner_id)
                        .ok_or_else(|| Error::Inconsistent(format!("pairing target {partner_id:?} missing")))?;
                    done.insert(partner_id);
                    let id = self.origin[&e.id].clone();
                    // Both halves keep their source endpoint at slot 0.
                    vertices.insert(e.ends[0].clone());
                    vertices.insert(partner.ends[0].clone());
                    edges.push(Edge {
                        id,
                        ends: [e.ends[0].clone(), partner.ends[0].clone()],
                    });
                }
            }
        }
        Graph::new(vertices, edges)
    }
}

/// Contracts the given internal, non-loop edges. Endpoint classes merge
/// into the lexicographically least member. Parallel edges of a collapsed
/// edge become loops; Betti numbers and leaf edges are preserved.
pub fn collapse(g: &Graph, to_collapse: &BTreeSet<EdgeId>) -> Result<Graph> {
    for id in to_collapse {
        let e = g
            .edge(id)
            .ok_or_else(|| Error::Validation(format!("cannot collapse unknown edge {id:?}")))?;
        if e.is_loop() {
            return Err(Error::Validation(format!("cannot collapse loop {id:?}")));
        }
        if g.leaf_edges().contains(id) {
            return Err(Error::Validation(format!("cannot collapse leaf edge {id:?}")));
        }
    }
    // Union-find with lexicographically least representatives.
    let mut parent: BTreeMap<&VertexId, &VertexId> = g.vertices().iter().map(|v| (v, v)).collect();
    fn find<'a>(parent: &mut BTreeMap<&'a VertexId, &'a VertexId>, v: &'a VertexId) -> &'a VertexId {
        let p = parent[v];
        if p == v {
            return v;
        }
        let root = find(parent, p);
        parent.insert(v, root);
        root
    }
    for id in to_collapse {
        let e = g.edge(id).expect("validated above");
        let a = find(&mut parent, &e.ends[0]);
        let b = find(&mut parent, &e.ends[1]);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        parent.insert(hi, lo);
    }
    let mut vertices = BTreeSet::new();
    for v in g.vertices() {
        vertices.insert(find(&mut parent, v).clone());
    }
    let mut edges = Vec::new();
    for e in g.edges() {
        if to_collapse.contains(&e.id) {
            continue;
        }
        edges.push(Edge {
            id: e.id.clone(),
            ends: [
                find(&mut parent, &e.ends[0]).clone(),
                find(&mut parent, &e.ends[1]).clone(),
            ],
        });
    }
    Graph::new(vertices, edges)
}

/// The canonical trivalent graph of type `(g, n)`: a caterpillar spine
/// carrying the `n` leaf edges first, then `g` loops, each loop on a
/// pendant tripod. The two types with `n + g = 2` need direct loops:
/// `(1,1)` is a single vertex with a leaf and a loop, `(2,0)` the
/// dumbbell. Types with no trivalent representative are rejected.
pub fn make_gamma_gn(g: usize, n: usize) -> Result<Graph> {
    if n + 2 * g < 3 {
        return Err(Error::DegenerateType { g, n });
    }
    let mut vertices: Vec<VertexId> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    if n + g == 2 {
        return match (g, n) {
            (1, 1) => Graph::new(
                ["s0".into(), "l0".into()],
                [
                    Edge { id: "leaf0".into(), ends: ["s0".into(), "l0".into()] },
                    Edge { id: "loop0".into(), ends: ["s0".into(), "s0".into()] },
                ],
            ),
            (2, 0) => Graph::new(
                ["s0".into(), "s1".into()],
                [
                    Edge { id: "spine0".into(), ends: ["s0".into(), "s1".into()] },
                    Edge { id: "loop0".into(), ends: ["s0".into(), "s0".into()] },
                    Edge { id: "loop1".into(), ends: ["s1".into(), "s1".into()] },
                ],
            ),
            _ => Err(Error::DegenerateType { g, n }),
        };
    }
    let spine = n + g - 2;
    for i in 0..spine {
        vertices.push(format!("s{i}"));
    }
    for i in 0..spine.saturating_sub(1) {
        edges.push(Edge {
            id: format!("spine{i}"),
            ends: [format!("s{i}"), format!("s{}", i + 1)],
        });
    }
    // Free slots in spine order: two on each end vertex, one on each
    // middle vertex. With one spine vertex all three slots sit there.
    let mut slots: Vec<usize> = Vec::with_capacity(n + g);
    if spine == 1 {
        slots.extend([0, 0, 0]);
    } else {
        slots.push(0);
        slots.push(0);
        slots.extend(1..spine - 1);
        slots.push(spine - 1);
        slots.push(spine - 1);
    }
    debug_assert_eq!(slots.len(), n + g);
    for (j, &s) in slots.iter().take(n).enumerate() {
        vertices.push(format!("l{j}"));
        edges.push(Edge {
            id: format!("leaf{j}"),
            ends: [format!("s{s}"), format!("l{j}")],
        });
    }
    for (j, &s) in slots.iter().skip(n).enumerate() {
        vertices.push(format!("p{j}"));
        edges.push(Edge {
            id: format!("pend{j}"),
            ends: [format!("s{s}"), format!("p{j}")],
        });
        edges.push(Edge {
            id: format!("loop{j}"),
            ends: [format!("p{j}"), format!("p{j}")],
        });
    }
    Graph::new(vertices, edges)
}

/// Shape data used for isomorphism testing: the inner multigraph with
/// vertices colored by their attached leaf count. Leaf edges themselves
/// are interchangeable and carry no identity.
fn inner_shape(g: &Graph) -> (Vec<usize>, Vec<(usize, usize)>) {
    let inner: Vec<&VertexId> = g.non_leaf_vertices();
    let index: BTreeMap<&VertexId, usize> = inner.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut leaf_counts = vec![0usize; inner.len()];
    let mut inner_edges = Vec::new();
    for e in g.edges() {
        let i0 = index.get(&e.ends[0]);
        let i1 = index.get(&e.ends[1]);
        match (i0, i1) {
            (Some(&a), Some(&b)) => inner_edges.push((a.min(b), a.max(b))),
            (Some(&a), None) => leaf_counts[a] += 1,
            (None, Some(&b)) => leaf_counts[b] += 1,
            (None, None) => {}
        }
    }
    inner_edges.sort_unstable();
    (leaf_counts, inner_edges)
}

fn apply_perm(
    perm: &[usize],
    leaf_counts: &[usize],
    inner_edges: &[(usize, usize)],
) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut colors = vec![0usize; leaf_counts.len()];
    for (v, &img) in perm.iter().enumerate() {
        colors[img] = leaf_counts[v];
    }
    let mut edges: Vec<(usize, usize)> = inner_edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    (colors, edges)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Canonical encoding of a graph shape: the minimum over all relabellings
/// of the inner vertices. Graphs are isomorphic iff encodings agree.
fn canonical_shape(g: &Graph) -> (Vec<usize>, Vec<(usize, usize)>) {
    let (leaf_counts, inner_edges) = inner_shape(g);
    permutations(leaf_counts.len())
        .iter()
        .map(|p| apply_perm(p, &leaf_counts, &inner_edges))
        .min()
        .unwrap_or((leaf_counts, inner_edges))
}

/// Exact isomorphism test for connected graphs whose leaves are
/// interchangeable.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    canonical_shape(a) == canonical_shape(b)
}

/// Enumerates all connected trivalent graphs of type `(g, n)` with at most
/// `max_edges` edges, up to isomorphism, in a deterministic order.
///
/// The edge count of such a graph is forced to `2n + 3g - 3`, so the bound
/// acts as a filter: types exceeding it yield an empty list. Types whose
/// inner search would explode are rejected with a resource error.
pub fn enumerate_trivalent_graphs(g: usize, n: usize, max_edges: usize) -> Result<Vec<Graph>> {
    if n + 2 * g < 3 {
        return Err(Error::DegenerateType { g, n });
    }
    let inner = n + 2 * g - 2;
    if inner > 8 {
        return Err(Error::ResourceBound { limit: 8 });
    }
    let total_edges = 2 * n + 3 * g - 3;
    if total_edges > max_edges {
        return Ok(Vec::new());
    }
    // Distribute the n leaves over the inner vertices, then enumerate
    // inner multigraphs with the complementary degree sequence.
    let mut shapes: BTreeSet<(Vec<usize>, Vec<(usize, usize)>)> = BTreeSet::new();
    let mut dist = vec![0usize; inner];
    distribute_leaves(0, n, &mut dist, &mut |dist| {
        let degrees: Vec<usize> = dist.iter().map(|&l| 3 - l).collect();
        let pairs: Vec<(usize, usize)> = (0..inner)
            .flat_map(|i| (i..inner).map(move |j| (i, j)))
            .collect();
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        let mut remaining = degrees.clone();
        enumerate_multigraphs(&pairs, 0, &mut remaining, &mut chosen, &mut |edges| {
            if !inner_connected(inner, edges) {
                return;
            }
            let leaf_counts = dist.to_vec();
            let canon = permutations(inner)
                .iter()
                .map(|p| apply_perm(p, &leaf_counts, edges))
                .min()
                .expect("at least the identity permutation");
            shapes.insert(canon);
        });
    });
    Ok(shapes.into_iter().map(|s| materialize(&s)).collect())
}

fn distribute_leaves(i: usize, left: usize, dist: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if i == dist.len() {
        if left == 0 {
            f(dist);
        }
        return;
    }
    let cap = left.min(3);
    for l in 0..=cap {
        dist[i] = l;
        distribute_leaves(i + 1, left - l, dist, f);
    }
    dist[i] = 0;
}

fn enumerate_multigraphs(
    pairs: &[(usize, usize)],
    k: usize,
    remaining: &mut Vec<usize>,
    chosen: &mut Vec<(usize, usize)>,
    f: &mut impl FnMut(&[(usize, usize)]),
) {
    if k == pairs.len() {
        if remaining.iter().all(|&d| d == 0) {
            f(chosen);
        }
        return;
    }
    let (i, j) = pairs[k];
    let cap = if i == j {
        remaining[i] / 2
    } else {
        remaining[i].min(remaining[j])
    };
    for mult in 0..=cap {
        if i == j {
            remaining[i] -= 2 * mult;
        } else {
            remaining[i] -= mult;
            remaining[j] -= mult;
        }
        let before = chosen.len();
        chosen.extend(std::iter::repeat((i, j)).take(mult));
        enumerate_multigraphs(pairs, k + 1, remaining, chosen, f);
        chosen.truncate(before);
        if i == j {
            remaining[i] += 2 * mult;
        } else {
            remaining[i] += mult;
            remaining[j] += mult;
        }
    }
}

fn inner_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Builds a concrete graph from a canonical shape.
fn materialize(shape: &(Vec<usize>, Vec<(usize, usize)>)) -> Graph {
    let (leaf_counts, inner_edges) = shape;
    let mut vertices: Vec<VertexId> = (0..leaf_counts.len()).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for (k, &(a, b)) in inner_edges.iter().enumerate() {
        edges.push(Edge {
            id: format!("e{k}"),
            ends: [format!("v{a}"), format!("v{b}")],
        });
    }
    let mut leaf_no = 0;
    for (v, &count) in leaf_counts.iter().enumerate() {
        for _ in 0..count {
            vertices.push(format!("t{leaf_no}"));
            edges.push(Edge {
                id: format!("f{leaf_no}"),
                ends: [format!("v{v}"), format!("t{leaf_no}")],
            });
            leaf_no += 1;
        }
    }
    Graph::new(vertices, edges).expect("materialized shape is a valid graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_leaf_tree() -> Graph {
        // Two inner vertices u, w joined by edge c; leaves a, b at u and
        // d, e at w.
        let e = |id: &str, from: &str, to: &str| Edge {
            id: id.into(),
            ends: [from.into(), to.into()],
        };
        Graph::new(
            ["u", "w", "l1", "l2", "l3", "l4"].map(String::from),
            [
                e("a", "u", "l1"),
                e("b", "u", "l2"),
                e("c", "u", "w"),
                e("d", "w", "l3"),
                e("e", "w", "l4"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn tripod_shape() {
        let t = Graph::tripod();
        assert_eq!(t.leaf_edges().len(), 3);
        assert_eq!(betti(&t), 0);
        assert!(t.is_trivalent());
        assert!(t.is_connected());
    }

    #[test]
    fn betti_loop_leaf() {
        let g = make_gamma_gn(1, 1).unwrap();
        assert_eq!(betti(&g), 1);
        assert_eq!(g.leaf_edges().len(), 1);
        assert!(g.is_trivalent());
    }

    #[test]
    fn betti_gamma_23() {
        let g = make_gamma_gn(2, 3).unwrap();
        assert_eq!(betti(&g), 2);
        assert_eq!(g.leaf_edges().len(), 3);
        assert!(g.is_trivalent());
        assert!(g.is_connected());
    }

    #[test]
    fn gamma_family_invariants() {
        for g in 0..=3 {
            for n in 0..=5 {
                match make_gamma_gn(g, n) {
                    Ok(graph) => {
                        assert_eq!(betti(&graph), g, "betti of ({g},{n})");
                        assert_eq!(graph.leaf_edges().len(), n, "leaves of ({g},{n})");
                        assert!(graph.is_trivalent(), "trivalence of ({g},{n})");
                        assert!(graph.is_connected(), "connectivity of ({g},{n})");
                    }
                    Err(Error::DegenerateType { .. }) => {
                        assert!(n + 2 * g < 3, "({g},{n}) wrongly rejected");
                    }
                    Err(e) => panic!("unexpected error for ({g},{n}): {e}"),
                }
            }
        }
    }

    #[test]
    fn degenerate_types_rejected() {
        for (g, n) in [(0, 0), (0, 1), (0, 2), (1, 0)] {
            assert!(matches!(make_gamma_gn(g, n), Err(Error::DegenerateType { .. })));
        }
    }

    #[test]
    fn gamma_03_is_tripod() {
        let g = make_gamma_gn(0, 3).unwrap();
        assert!(are_isomorphic(&g, &Graph::tripod()));
    }

    #[test]
    fn covering_forest_tripod_is_identity_shape() {
        let t = Graph::tripod();
        let cf = covering_forest(&t).unwrap();
        assert_eq!(cf.forest, t);
        assert!(cf.pairing.is_empty());
    }

    #[test]
    fn covering_forest_four_leaf_tree() {
        let g = four_leaf_tree();
        let cf = covering_forest(&g).unwrap();
        assert_eq!(cf.forest.component_count(), 2);
        assert_eq!(cf.pairing.len(), 2);
        assert_eq!(cf.pairing["c#0"], "c#1");
        // Each component is a tripod around one source vertex.
        assert_eq!(cf.forest.non_leaf_vertices().len(), 2);
        assert_eq!(betti(&cf.forest), 0);
    }

    #[test]
    fn covering_forest_loop_gives_paired_tripod() {
        let g = make_gamma_gn(1, 1).unwrap();
        let cf = covering_forest(&g).unwrap();
        assert_eq!(cf.forest.edges().len(), 3);
        assert_eq!(cf.forest.non_leaf_vertices().len(), 1);
        assert_eq!(cf.pairing.len(), 2);
        assert!(are_isomorphic(&cf.forest, &Graph::tripod()));
    }

    #[test]
    fn reglue_reconstructs_source() {
        for g in [
            Graph::tripod(),
            four_leaf_tree(),
            make_gamma_gn(1, 1).unwrap(),
            make_gamma_gn(2, 2).unwrap(),
            make_gamma_gn(1, 3).unwrap(),
        ] {
            let cf = covering_forest(&g).unwrap();
            assert_eq!(cf.reglue().unwrap(), g, "reglue failed");
            assert_eq!(betti(&cf.forest), 0, "covering forest must be a forest");
        }
    }

    #[test]
    fn collapse_four_leaf_tree_to_claw() {
        let g = four_leaf_tree();
        let collapsed = collapse(&g, &BTreeSet::from(["c".to_string()])).unwrap();
        assert_eq!(collapsed.non_leaf_vertices().len(), 1);
        assert_eq!(collapsed.leaf_edges().len(), 4);
        assert_eq!(betti(&collapsed), 0);
        assert_eq!(collapsed.degree("u"), 4);
    }

    #[test]
    fn collapse_empty_set_is_identity() {
        let g = four_leaf_tree();
        assert_eq!(collapse(&g, &BTreeSet::new()).unwrap(), g);
    }

    #[test]
    fn collapse_rejects_loops_and_leaves() {
        let g = make_gamma_gn(1, 1).unwrap();
        assert!(collapse(&g, &BTreeSet::from(["loop0".to_string()])).is_err());
        assert!(collapse(&g, &BTreeSet::from(["leaf0".to_string()])).is_err());
    }

    #[test]
    fn collapse_preserves_betti() {
        let g = make_gamma_gn(2, 2).unwrap();
        let collapsed = collapse(&g, &BTreeSet::from(["spine0".to_string()])).unwrap();
        assert_eq!(betti(&collapsed), 2);
        assert_eq!(collapsed.leaf_edges().len(), 2);
    }

    #[test]
    fn enumerate_04_unique() {
        let graphs = enumerate_trivalent_graphs(0, 4, 16).unwrap();
        assert_eq!(graphs.len(), 1);
        assert_eq!(graphs[0].edges().len(), 5);
    }

    #[test]
    fn enumerate_06_two_trees() {
        let graphs = enumerate_trivalent_graphs(0, 6, 16).unwrap();
        assert_eq!(graphs.len(), 2, "caterpillar and snowflake");
        for g in &graphs {
            assert_eq!(betti(g), 0);
            assert_eq!(g.leaf_edges().len(), 6);
            assert!(g.is_trivalent());
        }
        assert!(!are_isomorphic(&graphs[0], &graphs[1]));
        assert!(graphs.iter().any(|g| are_isomorphic(g, &make_gamma_gn(0, 6).unwrap())));
    }

    #[test]
    fn enumerate_12_contains_gamma() {
        let graphs = enumerate_trivalent_graphs(1, 2, 16).unwrap();
        assert_eq!(graphs.len(), 2, "loop caterpillar and two-leaf banana");
        let gamma = make_gamma_gn(1, 2).unwrap();
        assert!(graphs.iter().any(|g| are_isomorphic(g, &gamma)));
        for g in &graphs {
            assert_eq!(betti(g), 1);
            assert_eq!(g.leaf_edges().len(), 2);
            assert!(g.is_trivalent());
        }
    }

    #[test]
    fn enumerate_11_unique() {
        let graphs = enumerate_trivalent_graphs(1, 1, 16).unwrap();
        assert_eq!(graphs.len(), 1);
        assert!(are_isomorphic(&graphs[0], &make_gamma_gn(1, 1).unwrap()));
    }

    #[test]
    fn enumerate_respects_max_edges() {
        assert!(enumerate_trivalent_graphs(0, 6, 5).unwrap().is_empty());
    }

    #[test]
    fn enumerate_members_all_distinct() {
        for (g, n) in [(1, 3), (2, 2), (0, 6)] {
            let graphs = enumerate_trivalent_graphs(g, n, 32).unwrap();
            for i in 0..graphs.len() {
                for j in i + 1..graphs.len() {
                    assert!(!are_isomorphic(&graphs[i], &graphs[j]));
                }
            }
            for gr in &graphs {
                assert_eq!(betti(gr), g);
                assert_eq!(gr.leaf_edges().len(), n);
                assert!(gr.is_trivalent());
                assert!(gr.is_connected());
                assert_eq!(gr.edges().len(), 2 * n + 3 * g - 3);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for g in [Graph::tripod(), four_leaf_tree(), make_gamma_gn(2, 2).unwrap()] {
            let v = g.to_json();
            let parsed = Graph::from_json(&v).unwrap();
            assert_eq!(parsed, g);
        }
    }

    #[test]
    fn json_rejects_wrong_leaf_claim() {
        let mut v = Graph::tripod().to_json();
        v["leaf_edges"] = json!(["e1", "e2"]);
        assert!(Graph::from_json(&v).is_err());
    }

    #[test]
    fn json_rejects_duplicate_edge_ids() {
        let v = json!({
            "vertices": ["a", "b"],
            "edges": [
                {"id": "e", "ends": ["a", "b"]},
                {"id": "e", "ends": ["b", "a"]},
            ],
        });
        assert!(Graph::from_json(&v).is_err());
    }

    #[test]
    fn leaf_edge_invariant() {
        let g = four_leaf_tree();
        for id in g.leaf_edges() {
            let e = g.edge(id).unwrap();
            let deg1 = (g.degree(&e.ends[0]) == 1) as usize + (g.degree(&e.ends[1]) == 1) as usize;
            assert_eq!(deg1, 1, "leaf edge {id} must touch exactly one leaf vertex");
        }
    }

    #[test]
    fn bare_edge_rejected() {
        let r = Graph::new(
            ["a".into(), "b".into()],
            [Edge { id: "e".into(), ends: ["a".into(), "b".into()] }],
        );
        assert!(r.is_err());
    }

    #[test]
    fn incident_half_edges_sorted_with_loops() {
        let g = make_gamma_gn(1, 1).unwrap();
        let he = g.incident_half_edges("s0");
        assert_eq!(he.len(), 3);
        let ids: Vec<(&str, usize)> = he
            .iter()
            .map(|&(i, s)| (g.edges()[i].id.as_str(), s))
            .collect();
        assert_eq!(ids, vec![("leaf0", 0), ("loop0", 0), ("loop0", 1)]);
    }
}
