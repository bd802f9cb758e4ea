//! Hilbert function counting by dynamic programming over the split tree.
//!
//! A degree-`d` element assigns to every tree edge a count vector with
//! sum at most `d`. An assignment belongs to the semigroup exactly when
//! every inner vertex is locally realizable: its incident count vectors,
//! read towards the vertex, can be cut into `d` residue tuples that each
//! sum to zero mod `m` (unused slots carry the residue zero). Local
//! realizability on a tree is equivalent to global: matching labellings
//! glue along edges because both sides produce the same label multiset.
//!
//! The count runs over the choices of split-pair marginals (the far half
//! of each cut cycle edge carries the reversed vector) and, for each
//! choice, a rooted tree DP with memoized vertex feasibility.

use super::{neg_mod, reverse_counts, SplitTree};
use crate::graphs::Graph;
use crate::{check_modulus, Error, Result};
use std::collections::{BTreeMap, HashMap};

/// Memoized local realizability: can `residuals` (one count vector per
/// incident edge, read towards the vertex) be covered by `t` zero-sum
/// residue tuples?
pub(crate) struct Realizer {
    m: u32,
    memo: HashMap<(Vec<Vec<u32>>, u32), bool>,
}

impl Realizer {
    pub(crate) fn new(m: u32) -> Realizer {
        Realizer { m, memo: HashMap::new() }
    }

    pub(crate) fn feasible(&mut self, residuals: &[Vec<u32>], t: u32) -> bool {
        if residuals.iter().all(|r| r.iter().all(|&c| c == 0)) {
            return true;
        }
        if t == 0 {
            return false;
        }
        let key = (residuals.to_vec(), t);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut work = residuals.to_vec();
        let first = work
            .iter()
            .position(|r| r.iter().any(|&c| c != 0))
            .expect("nonzero residual exists");
        let result = self.branch(&mut work, first, first, 0, t);
        self.memo.insert(key, result);
        result
    }

    /// Chooses the next tuple: edge `first` takes a nonzero residue, later
    /// edges any available residue or zero, the total vanishing mod `m`.
    fn branch(&mut self, work: &mut Vec<Vec<u32>>, idx: usize, first: usize, sum: u32, t: u32) -> bool {
        if idx == work.len() {
            return sum % self.m == 0 && {
                let snapshot = work.clone();
                self.feasible(&snapshot, t - 1)
            };
        }
        let choices: Vec<u32> = if idx == first {
            (1..self.m).filter(|&a| work[idx][(a - 1) as usize] > 0).collect()
        } else {
            std::iter::once(0)
                .chain((1..self.m).filter(|&a| work[idx][(a - 1) as usize] > 0))
                .collect()
        };
        for a in choices {
            if a != 0 {
                work[idx][(a - 1) as usize] -= 1;
            }
            if self.branch(work, idx + 1, first, sum + a, t) {
                if a != 0 {
                    work[idx][(a - 1) as usize] += 1;
                }
                return true;
            }
            if a != 0 {
                work[idx][(a - 1) as usize] += 1;
            }
        }
        false
    }

    /// Produces the lexicographically first decomposition into exactly `t`
    /// tuples (zero tuples padded at the end), or `None`.
    pub(crate) fn decompose(&mut self, residuals: &[Vec<u32>], t: u32) -> Option<Vec<Vec<u32>>> {
        let k = residuals.len();
        if residuals.iter().all(|r| r.iter().all(|&c| c == 0)) {
            return Some(vec![vec![0; k]; t as usize]);
        }
        if t == 0 {
            return None;
        }
        if !self.feasible(residuals, t) {
            return None;
        }
        let mut work = residuals.to_vec();
        let first = work.iter().position(|r| r.iter().any(|&c| c != 0)).expect("nonzero");
        let mut tuple = vec![0u32; k];
        self.decompose_branch(&mut work, first, first, 0, t, &mut tuple)
    }

    fn decompose_branch(
        &mut self,
        work: &mut Vec<Vec<u32>>,
        idx: usize,
        first: usize,
        sum: u32,
        t: u32,
        tuple: &mut Vec<u32>,
    ) -> Option<Vec<Vec<u32>>> {
        if idx == work.len() {
            if sum % self.m != 0 {
                return None;
            }
            let snapshot = work.clone();
            return self.decompose(&snapshot, t - 1).map(|mut rest| {
                let mut out = vec![tuple.clone()];
                out.append(&mut rest);
                out
            });
        }
        let choices: Vec<u32> = if idx == first {
            (1..self.m).filter(|&a| work[idx][(a - 1) as usize] > 0).collect()
        } else {
            std::iter::once(0)
                .chain((1..self.m).filter(|&a| work[idx][(a - 1) as usize] > 0))
                .collect()
        };
        for a in choices {
            if a != 0 {
                work[idx][(a - 1) as usize] -= 1;
            }
            tuple[idx] = a;
            let res = self.decompose_branch(work, idx + 1, first, sum + a, t, tuple);
            tuple[idx] = 0;
            if a != 0 {
                work[idx][(a - 1) as usize] += 1;
            }
            if res.is_some() {
                return res;
            }
        }
        None
    }
}

/// All count vectors of length `m - 1` with sum at most `d`, in
/// lexicographic order.
pub(crate) fn marginal_options(m: u32, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; (m - 1) as usize];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// A rooted view of a tree: parent edges and child lists for the DP.
pub(crate) struct Rooted {
    /// Vertex ids indexed by position.
    pub verts: Vec<String>,
    pub root: usize,
    /// `children[v]` lists `(edge index, child vertex)` pairs.
    pub children: Vec<Vec<(usize, usize)>>,
    /// `parent_edge[v]` is the edge index towards the root, if any.
    pub parent_edge: Vec<Option<usize>>,
    /// True when the vertex has degree at least two.
    pub inner: Vec<bool>,
}

pub(crate) fn root_tree(tree: &Graph) -> Result<Rooted> {
    let verts: Vec<String> = tree.vertices().to_vec();
    let index: BTreeMap<&str, usize> = verts.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let inner: Vec<bool> = verts.iter().map(|v| tree.degree(v) >= 2).collect();
    let root = inner
        .iter()
        .position(|&b| b)
        .ok_or_else(|| Error::Validation("tree has no inner vertex".into()))?;
    let mut children = vec![Vec::new(); verts.len()];
    let mut parent_edge = vec![None; verts.len()];
    let mut seen = vec![false; verts.len()];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(u) = stack.pop() {
        for (edge_idx, slot) in tree.incident_half_edges(&verts[u]) {
            let e = &tree.edges()[edge_idx];
            let w = index[e.ends[1 - slot].as_str()];
            if !seen[w] {
                seen[w] = true;
                children[u].push((edge_idx, w));
                parent_edge[w] = Some(edge_idx);
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Validation("tree is not connected".into()));
    }
    Ok(Rooted { verts, root, children, parent_edge, inner })
}

/// The count vector of `edge_idx` as read towards vertex `v`: identity at
/// the slot-0 endpoint, reversal at the slot-1 endpoint.
pub(crate) fn towards(tree: &Graph, edge_idx: usize, v: &str, marg: &[u32]) -> Vec<u32> {
    let e = &tree.edges()[edge_idx];
    if e.ends[0] == v {
        marg.to_vec()
    } else {
        reverse_counts(marg)
    }
}

struct TreeCounter<'a> {
    tree: &'a Graph,
    rooted: &'a Rooted,
    d: u32,
    options: Vec<Vec<u32>>,
    pinned: &'a BTreeMap<String, Vec<u32>>,
    realizer: &'a mut Realizer,
    memo: HashMap<(usize, Vec<u32>), u64>,
}

impl TreeCounter<'_> {
    fn edge_options(&self, edge_idx: usize) -> Vec<Vec<u32>> {
        let id = &self.tree.edges()[edge_idx].id;
        match self.pinned.get(id) {
            Some(v) => vec![v.clone()],
            None => self.options.clone(),
        }
    }

    /// Number of valid assignments strictly below `v`, given the count
    /// vector on its parent edge.
    fn count(&mut self, v: usize, parent_marg: &[u32]) -> u64 {
        if !self.rooted.inner[v] {
            return 1;
        }
        let key = (v, parent_marg.to_vec());
        if let Some(&c) = self.memo.get(&key) {
            return c;
        }
        let vert = self.rooted.verts[v].clone();
        let parent_towards = self
            .rooted
            .parent_edge[v]
            .map(|pe| towards(self.tree, pe, &vert, parent_marg));
        let child_list = self.rooted.children[v].clone();
        let total = self.sum_children(v, &vert, &child_list, 0, &mut Vec::new(), parent_towards.as_deref());
        self.memo.insert(key, total);
        total
    }

    fn sum_children(
        &mut self,
        v: usize,
        vert: &str,
        child_list: &[(usize, usize)],
        i: usize,
        chosen: &mut Vec<Vec<u32>>,
        parent_towards: Option<&[u32]>,
    ) -> u64 {
        if i == child_list.len() {
            let mut local: Vec<Vec<u32>> = Vec::with_capacity(chosen.len() + 1);
            if let Some(p) = parent_towards {
                local.push(p.to_vec());
            }
            for (k, &(edge_idx, _)) in child_list.iter().enumerate() {
                local.push(towards(self.tree, edge_idx, vert, &chosen[k]));
            }
            if !self.realizer.feasible(&local, self.d) {
                return 0;
            }
            let mut prod = 1u64;
            for (k, &(_, w)) in child_list.iter().enumerate() {
                prod = prod.saturating_mul(self.count(w, &chosen[k]));
                if prod == 0 {
                    break;
                }
            }
            return prod;
        }
        let (edge_idx, _) = child_list[i];
        let opts = self.edge_options(edge_idx);
        let mut total = 0u64;
        for o in opts {
            chosen.push(o);
            total = total.saturating_add(self.sum_children(v, vert, child_list, i + 1, chosen, parent_towards));
            chosen.pop();
        }
        total
    }
}

/// The Hilbert function of the graded semigroup of a connected graph: the
/// number of distinct degree-`d` elements.
pub fn hilbert_value(g: &Graph, m: u32, d: u32) -> Result<u64> {
    check_modulus(m)?;
    let split = super::associated_tree(g)?;
    hilbert_on_split(&split, m, d)
}

pub(crate) fn hilbert_on_split(split: &SplitTree, m: u32, d: u32) -> Result<u64> {
    let rooted = root_tree(&split.tree)?;
    let options = marginal_options(m, d);
    let mut realizer = Realizer::new(m);
    let mut total = 0u64;
    // Outer loop: the marginal of each split pair; the far half carries
    // the reversed vector.
    let pair_count = split.pairs.len();
    let mut pick = vec![0usize; pair_count];
    loop {
        let mut pinned: BTreeMap<String, Vec<u32>> = BTreeMap::new();
        for (k, (h0, h1)) in split.pairs.iter().enumerate() {
            let marg = &options[pick[k]];
            pinned.insert(h0.clone(), marg.clone());
            pinned.insert(h1.clone(), reverse_counts(marg));
        }
        let mut counter = TreeCounter {
            tree: &split.tree,
            rooted: &rooted,
            d,
            options: options.clone(),
            pinned: &pinned,
            realizer: &mut realizer,
            memo: HashMap::new(),
        };
        let root = rooted.root;
        let vert = rooted.verts[root].clone();
        let child_list = rooted.children[root].clone();
        total = total.saturating_add(counter.sum_children(root, &vert, &child_list, 0, &mut Vec::new(), None));
        // Advance the outer odometer.
        let mut k = 0;
        loop {
            if k == pair_count {
                return Ok(total);
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

/// Sign-aware negation helper shared with the membership code.
pub(crate) fn signed_value(label: u32, slot: usize, m: u32) -> u32 {
    if slot == 0 {
        label
    } else {
        neg_mod(label, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{make_gamma_gn, Graph};

    #[test]
    fn realizer_simple_cases() {
        let mut r = Realizer::new(2);
        // Tripod vertex: marginals (1,1,0) with one labelling.
        assert!(r.feasible(&[vec![1], vec![1], vec![0]], 1));
        // (1,0,0) cannot balance.
        assert!(!r.feasible(&[vec![1], vec![0], vec![0]], 1));
        // (2,2,2) needs three labellings, not two.
        assert!(!r.feasible(&[vec![2], vec![2], vec![2]], 2));
        assert!(r.feasible(&[vec![2], vec![2], vec![2]], 3));
    }

    #[test]
    fn realizer_m3() {
        let mut r = Realizer::new(3);
        // Label 1 on two edges sums to 2, not 0.
        assert!(!r.feasible(&[vec![1, 0], vec![1, 0], vec![0, 0]], 1));
        // 1 + 2 = 0 mod 3.
        assert!(r.feasible(&[vec![1, 0], vec![0, 1], vec![0, 0]], 1));
        // 1 + 1 + 1 = 0 mod 3.
        assert!(r.feasible(&[vec![1, 0], vec![1, 0], vec![1, 0]], 1));
    }

    #[test]
    fn decompose_matches_feasibility_and_pads() {
        let mut r = Realizer::new(3);
        let residuals = vec![vec![1, 1], vec![1, 1], vec![0, 0]];
        let dec = r.decompose(&residuals, 3).expect("feasible");
        assert_eq!(dec.len(), 3);
        // Each tuple sums to zero mod 3 and consumption matches.
        let mut consumed = vec![vec![0u32; 2]; 3];
        for tuple in &dec {
            let s: u32 = tuple.iter().sum();
            assert_eq!(s % 3, 0);
            for (e, &a) in tuple.iter().enumerate() {
                if a != 0 {
                    consumed[e][(a - 1) as usize] += 1;
                }
            }
        }
        assert_eq!(consumed, vec![vec![1, 1], vec![1, 1], vec![0, 0]]);
    }

    #[test]
    fn marginal_options_count() {
        // Vectors of length 2 with sum <= 3: C(5,2) = 10.
        assert_eq!(marginal_options(3, 3).len(), 10);
        assert_eq!(marginal_options(2, 4).len(), 5);
    }

    #[test]
    fn hilbert_degree_zero_is_one() {
        let t = Graph::tripod();
        assert_eq!(hilbert_value(&t, 3, 0).unwrap(), 1);
        let g = make_gamma_gn(1, 2).unwrap();
        assert_eq!(hilbert_value(&g, 2, 0).unwrap(), 1);
    }

    #[test]
    fn hilbert_degree_one_matches_labelling_count() {
        for (g, n) in [(0usize, 3usize), (0, 4), (1, 1), (1, 2), (2, 2)] {
            let graph = make_gamma_gn(g, n).unwrap();
            for m in 2u32..=3 {
                let labellings = super::super::degree_one_elements(&graph, m).unwrap().len() as u64;
                assert_eq!(
                    hilbert_value(&graph, m, 1).unwrap(),
                    labellings,
                    "type ({g},{n}), m = {m}"
                );
            }
        }
    }

    #[test]
    fn hilbert_tripod_m2_degree_two() {
        // The ten distinct sums of two of the four tripod labellings.
        assert_eq!(hilbert_value(&Graph::tripod(), 2, 2).unwrap(), 10);
    }

    #[test]
    fn hilbert_matches_brute_force_on_trees() {
        for (graph, m, dmax) in [
            (Graph::tripod(), 2, 4),
            (Graph::tripod(), 3, 3),
            (make_gamma_gn(0, 4).unwrap(), 2, 3),
            (make_gamma_gn(0, 4).unwrap(), 3, 2),
        ] {
            for d in 0..=dmax {
                let dp = hilbert_value(&graph, m, d).unwrap();
                let brute = super::super::enumerate_elements(&graph, m, d).unwrap().len() as u64;
                assert_eq!(dp, brute, "m = {m}, d = {d}");
            }
        }
    }

    #[test]
    fn hilbert_matches_brute_force_with_cycles() {
        for (g, n, m, dmax) in [(1usize, 1usize, 2u32, 4u32), (1, 1, 3, 3), (1, 2, 2, 3), (1, 2, 3, 2)] {
            let graph = make_gamma_gn(g, n).unwrap();
            for d in 0..=dmax {
                let dp = hilbert_value(&graph, m, d).unwrap();
                let brute = super::super::enumerate_elements(&graph, m, d).unwrap().len() as u64;
                assert_eq!(dp, brute, "type ({g},{n}), m = {m}, d = {d}");
            }
        }
    }

    #[test]
    fn hilbert_supports_claw_trees() {
        // Collapse the internal edge of the four-leaf tree: a claw whose
        // center has degree four. Degree-one labellings of the claw: all
        // four labels sum to zero, so m^3 of them.
        let g = make_gamma_gn(0, 4).unwrap();
        let internal: Vec<String> = g
            .internal_edges()
            .map(|e| e.id.clone())
            .collect();
        let claw = crate::graphs::collapse(&g, &internal.into_iter().collect()).unwrap();
        assert_eq!(hilbert_value(&claw, 2, 1).unwrap(), 8);
        assert_eq!(hilbert_value(&claw, 3, 1).unwrap(), 27);
    }
}
