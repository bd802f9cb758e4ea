//! Crossing between the labelling world and the triangle world.
//!
//! Degree-one tripod elements lift to explicit triangles whose boundary
//! weights read off the labelling residues under `[a] -> ω_a`. Sums of
//! those lifts give boundary preimages for bounded-degree elements; for
//! m = 2 and 3 the boundary projection is onto the labelling semigroup
//! and the match is exact, while for m >= 4 an explicit triangle
//! projects outside it. On trivalent graphs, glued triangle families
//! cover the graded semigroup for m = 3, level by level.

use crate::bz::{
    add as add_triangles, build_grid, decompose_graded_sl3, enumerate_fiber,
    sl3_graded_generators, validate_glued, vertex_sides, weights_up_to, BzTriangle,
    GluedBzElement, Point, Side,
};
use crate::cyclic::{
    degree_one_elements, enumerate_elements, hilbert_value, in_rpr, is_member, tripod_vertices,
    EdgeLabelling, PhyloElement,
};
use crate::graphs::{enumerate_trivalent_graphs, Graph};
use crate::weights::{fundamental_triple_invariant, DominantWeight};
use crate::{check_modulus, Error, Result};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// The weight triple of a tripod element: counts on `e1`, `e2`, `e3`
/// read as fundamental-weight coordinates in the λ, μ, ν slots.
pub fn tripod_weight_triple(
    x: &PhyloElement,
) -> Result<(DominantWeight, DominantWeight, DominantWeight)> {
    x.validate_on(&Graph::tripod())?;
    Ok((
        DominantWeight::new(x.m, x.marginal("e1"))?,
        DominantWeight::new(x.m, x.marginal("e2"))?,
        DominantWeight::new(x.m, x.marginal("e3"))?,
    ))
}

/// The per-edge residues of a degree-one tripod element: each count
/// vector must be zero or a unit vector, and the residues must sum to
/// zero mod m.
fn vertex_residues(m: u32, v: &PhyloElement) -> Result<[u32; 3]> {
    if v.m != m {
        return Err(Error::ModulusMismatch(m, v.m));
    }
    if v.degree != 1 {
        return Err(Error::Validation(format!(
            "expected a degree-one element, got degree {}",
            v.degree
        )));
    }
    v.validate_on(&Graph::tripod())?;
    let mut res = [0u32; 3];
    for (slot, e) in ["e1", "e2", "e3"].iter().enumerate() {
        let counts = v.marginal(e);
        let total: u32 = counts.iter().sum();
        res[slot] = match total {
            0 => 0,
            1 => counts.iter().position(|&c| c == 1).unwrap() as u32 + 1,
            _ => {
                return Err(Error::Validation(format!(
                    "counts on edge {e:?} are neither zero nor a unit vector"
                )))
            }
        };
    }
    if (res[0] + res[1] + res[2]) % m != 0 {
        return Err(Error::Validation(format!(
            "residues {res:?} do not sum to zero mod {m}"
        )));
    }
    Ok(res)
}

/// G-points of the geometric lift of a tripod vertex with residues
/// `(i, j, k)`: nothing for the zero vertex, a line segment on the
/// grid line `2i - 1` parallel to one side for a pair, and three rays
/// out of a hexagon center for a triple. The triple rays leave in the
/// directions that reach the boundary points contributing ω_i, ω_j,
/// ω_k to λ, μ, ν respectively.
fn vertex_recipe(m: u32, r: [u32; 3]) -> Vec<Point> {
    let m = i64::from(m);
    let [i, j, k] = r.map(i64::from);
    let mut pts = Vec::new();
    match (i != 0, j != 0, k != 0) {
        (false, false, false) => {}
        (true, true, false) => {
            for a in 0..=(m - i - 1) {
                pts.push((2 * a, 2 * i - 1, 2 * (m - i - 1 - a)));
            }
        }
        (true, false, true) => {
            for b in 0..=(i - 1) {
                pts.push((2 * (m - i) - 1, 2 * b, 2 * (i - 1 - b)));
            }
        }
        (false, true, true) => {
            for a in 0..=(m - j - 1) {
                pts.push((2 * a, 2 * (m - j - 1 - a), 2 * j - 1));
            }
        }
        (true, true, true) => {
            if i + j + k == m {
                let c = (2 * k - 1, 2 * i - 1, 2 * j - 1);
                ray(&mut pts, c, (1, 0, -1), j);
                ray(&mut pts, c, (-1, 1, 0), k);
                ray(&mut pts, c, (0, -1, 1), i);
            } else {
                let c = (2 * (m - i) - 1, 2 * (m - j) - 1, 2 * (m - k) - 1);
                ray(&mut pts, c, (-1, 0, 1), m - i);
                ray(&mut pts, c, (1, -1, 0), m - j);
                ray(&mut pts, c, (0, 1, -1), m - k);
            }
        }
        // A single nonzero residue below m cannot sum to zero mod m.
        _ => unreachable!("residue triple validated to sum to zero"),
    }
    pts
}

/// The G-points on a ray from a hexagon center: every second lattice
/// step, `steps` of them.
fn ray(pts: &mut Vec<Point>, from: Point, dir: Point, steps: i64) {
    for s in 0..steps {
        let t = 2 * s + 1;
        pts.push((from.0 + t * dir.0, from.1 + t * dir.1, from.2 + t * dir.2));
    }
}

/// Lifts a degree-one tripod element to a triangle with the matching
/// boundary weights. The geometric recipe is checked against both the
/// hexagon conditions and the projection; if either check fails the
/// lift falls back to fiber search, so the result is correct by
/// construction whenever it exists.
pub fn vertex_to_bz(m: u32, v: &PhyloElement) -> Result<BzTriangle> {
    check_modulus(m)?;
    let residues = vertex_residues(m, v)?;
    let (lam, mu, nu) = tripod_weight_triple(v)?;
    let grid = build_grid(m)?;
    let built = (|| -> Result<BzTriangle> {
        let mut values = vec![0u64; grid.g_points().len()];
        for p in vertex_recipe(m, residues) {
            let idx = grid
                .index_of(&p)
                .ok_or_else(|| Error::Inconsistent(format!("recipe point {p:?} off the grid")))?;
            values[idx] += 1;
        }
        BzTriangle::with_grid(&grid, values)
    })();
    if let Ok(t) = built {
        if t.pr_with(&grid)? == (lam.clone(), mu.clone(), nu.clone()) {
            return Ok(t);
        }
    }
    enumerate_fiber(m, &lam, &mu, &nu)?
        .into_iter()
        .next()
        .ok_or_else(|| {
            Error::Inconsistent(format!("no triangle projects to the vertex {}", v.to_json()))
        })
}

/// Per-edge coordinates of a weight triple on the tripod.
fn triple_coords(
    lam: &DominantWeight,
    mu: &DominantWeight,
    nu: &DominantWeight,
) -> BTreeMap<String, Vec<u32>> {
    [
        ("e1".to_string(), lam.coords().to_vec()),
        ("e2".to_string(), mu.coords().to_vec()),
        ("e3".to_string(), nu.coords().to_vec()),
    ]
    .into_iter()
    .collect()
}

/// Outcome of the bounded inclusion and equality experiment.
#[derive(Debug, Clone)]
pub struct InclusionReport {
    pub m: u32,
    pub degree_bound: u32,
    /// Tripod elements of degree at most the bound.
    pub forward_elements: usize,
    /// Elements with no certified triangle preimage (expected none).
    pub forward_violations: Vec<Value>,
    /// Weight triples swept on the triangle side.
    pub reverse_triples: usize,
    /// Triples with at least one triangle above them.
    pub reverse_nonempty: usize,
    /// Projected triples outside the labelling semigroup; empty for
    /// m = 2 and 3, populated from m = 4 on.
    pub equality_violations: Vec<Value>,
}

impl InclusionReport {
    /// Every labelling element had a triangle above it.
    pub fn inclusion_certified(&self) -> bool {
        self.forward_violations.is_empty()
    }

    /// Inclusion holds and no projected triple escaped the semigroup.
    pub fn equality_certified(&self) -> bool {
        self.inclusion_certified() && self.equality_violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "degree_bound": self.degree_bound,
            "forward_elements": self.forward_elements,
            "forward_violations": self.forward_violations,
            "reverse_triples": self.reverse_triples,
            "reverse_nonempty": self.reverse_nonempty,
            "equality_violations": self.equality_violations,
            "inclusion_certified": self.inclusion_certified(),
            "equality_certified": self.equality_certified(),
        })
    }
}

impl fmt::Display for InclusionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inclusion report: m = {}, degree bound = {}", self.m, self.degree_bound)?;
        writeln!(
            f,
            "  forward:  {} elements checked, {} without a triangle preimage",
            self.forward_elements,
            self.forward_violations.len()
        )?;
        writeln!(
            f,
            "  reverse:  {} weight triples swept, {} nonempty fibers, {} projected outside",
            self.reverse_triples,
            self.reverse_nonempty,
            self.equality_violations.len()
        )?;
        writeln!(f, "  inclusion certified: {}", self.inclusion_certified())?;
        write!(f, "  equality certified:  {}", self.equality_certified())
    }
}

/// Certifies, degree by degree up to the bound, that every tripod
/// element has a triangle above it (built additively from vertex
/// lifts), and sweeps all weight triples with per-weight size up to the
/// bound to find projected triples outside the labelling semigroup.
pub fn check_inclusion(m: u32, degree_bound: u32) -> Result<InclusionReport> {
    check_modulus(m)?;
    let tripod = Graph::tripod();
    let verts = tripod_vertices(m)?;
    let lifts: Vec<BzTriangle> =
        verts.iter().map(|v| vertex_to_bz(m, v)).collect::<Result<_>>()?;
    // Sums of at most `degree_bound` vertices with their lifted sums.
    let mut preimages: BTreeMap<PhyloElement, BzTriangle> = BTreeMap::new();
    let mut layer: Vec<(PhyloElement, BzTriangle, usize)> =
        vec![(PhyloElement::zero(m, 0), BzTriangle::zero(m)?, 0)];
    preimages.insert(PhyloElement::zero(m, 0), BzTriangle::zero(m)?);
    for _ in 0..degree_bound {
        let mut next = Vec::with_capacity(layer.len() * verts.len());
        for (x, t, from) in &layer {
            for vi in *from..verts.len() {
                let x2 = x.add(&verts[vi])?;
                let t2 = add_triangles(t, &lifts[vi])?;
                preimages.entry(x2.clone()).or_insert_with(|| t2.clone());
                next.push((x2, t2, vi));
            }
        }
        layer = next;
    }
    let mut forward_elements = 0usize;
    let mut forward_violations = Vec::new();
    for d in 0..=degree_bound {
        for x in enumerate_elements(&tripod, m, d)? {
            forward_elements += 1;
            let (lam, mu, nu) = tripod_weight_triple(&x)?;
            let certified = match preimages.get(&x) {
                Some(t) => t.pr()? == (lam.clone(), mu.clone(), nu.clone()),
                None => !enumerate_fiber(m, &lam, &mu, &nu)?.is_empty(),
            };
            if !certified {
                forward_violations.push(json!({ "degree": d, "element": x.to_json() }));
            }
        }
    }
    let singles = weights_up_to(m, degree_bound)?;
    let mut reverse_triples = 0usize;
    let mut reverse_nonempty = 0usize;
    let mut equality_violations = Vec::new();
    for lam in &singles {
        for mu in &singles {
            for nu in &singles {
                reverse_triples += 1;
                if enumerate_fiber(m, lam, mu, nu)?.is_empty() {
                    continue;
                }
                reverse_nonempty += 1;
                let coords = triple_coords(lam, mu, nu);
                if in_rpr(&tripod, m, &coords)?.is_none() {
                    equality_violations.push(json!({
                        "lambda": lam.to_json(),
                        "mu": mu.to_json(),
                        "nu": nu.to_json(),
                    }));
                }
            }
        }
    }
    Ok(InclusionReport {
        m,
        degree_bound,
        forward_elements,
        forward_violations,
        reverse_triples,
        reverse_nonempty,
        equality_violations,
    })
}

/// The explicit triangle, for any m >= 4, whose boundary triple
/// `(ω_1 + ω_{m-1}; ω_2; ω_{m-2})` lies outside the labelling
/// semigroup. Value 1 sits at four boundary-adjacent points and along
/// the row c = 1; everything is verified before returning: hexagon
/// conditions, the stated projection, no degree-2 decomposition, and no
/// decomposition at any degree.
pub fn counterexample_m_ge_4(m: u32) -> Result<BzTriangle> {
    if m < 4 {
        return Err(Error::Validation(format!(
            "the projection counterexample needs m >= 4, got {m}"
        )));
    }
    let mi = i64::from(m);
    let grid = build_grid(m)?;
    let mut pts: Vec<Point> = vec![
        (2 * mi - 4, 1, 0),
        (1, 2 * mi - 4, 0),
        (2 * mi - 5, 0, 2),
        (0, 2 * mi - 5, 2),
    ];
    for alpha in 1..=(mi - 3) {
        pts.push((2 * alpha, 2 * (mi - 2 - alpha), 1));
    }
    let mut values = vec![0u64; grid.g_points().len()];
    for p in &pts {
        let idx = grid
            .index_of(p)
            .ok_or_else(|| Error::Inconsistent(format!("counterexample point {p:?} off the grid")))?;
        values[idx] = 1;
    }
    let t = BzTriangle::with_grid(&grid, values)?;
    let mut lam_coords = vec![0u32; (m - 1) as usize];
    lam_coords[0] += 1;
    lam_coords[(m - 2) as usize] += 1;
    let lam = DominantWeight::new(m, lam_coords)?;
    let mu = DominantWeight::fundamental(m, 2)?;
    let nu = DominantWeight::fundamental(m, m - 2)?;
    if t.pr_with(&grid)? != (lam.clone(), mu.clone(), nu.clone()) {
        return Err(Error::Inconsistent(
            "counterexample projection is not the stated triple".into(),
        ));
    }
    let coords = triple_coords(&lam, &mu, &nu);
    let x = PhyloElement::new(m, 2, coords.clone())?;
    let tripod = Graph::tripod();
    if is_member(&tripod, m, &x)?.member {
        return Err(Error::Inconsistent(
            "counterexample projection decomposes at degree 2".into(),
        ));
    }
    if in_rpr(&tripod, m, &coords)?.is_some() {
        return Err(Error::Inconsistent(
            "counterexample projection lies in the labelling semigroup".into(),
        ));
    }
    Ok(t)
}

/// Coverage counts for one level of the graded surjectivity check.
#[derive(Debug, Clone)]
pub struct PhiLevel {
    pub level: u32,
    pub elements: usize,
    pub covered: usize,
}

/// Outcome of the graded surjectivity check on a trivalent graph.
#[derive(Debug, Clone)]
pub struct PhiGammaReport {
    pub m: u32,
    pub l_bound: u32,
    pub levels: Vec<PhiLevel>,
    pub failures: Vec<Value>,
}

impl PhiGammaReport {
    pub fn fully_covered(&self) -> bool {
        self.failures.is_empty() && self.levels.iter().all(|l| l.covered == l.elements)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "level_bound": self.l_bound,
            "levels": self.levels.iter().map(|l| json!({
                "level": l.level,
                "elements": l.elements,
                "covered": l.covered,
            })).collect::<Vec<_>>(),
            "failures": self.failures,
            "fully_covered": self.fully_covered(),
        })
    }
}

impl fmt::Display for PhiGammaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graded coverage report: m = {}, levels 0..={}", self.m, self.l_bound)?;
        writeln!(f, "  level  elements  covered")?;
        for l in &self.levels {
            writeln!(f, "  {:>5}  {:>8}  {:>7}", l.level, l.elements, l.covered)?;
        }
        write!(f, "  fully covered: {}", self.fully_covered())
    }
}

/// For every element of the graded semigroup on `g` with level at most
/// `l_bound` (m = 3 only), builds a glued triangle family projecting
/// onto it: one triangle per inner vertex, summed from vertex lifts of
/// the element's witness labellings. Verifies the gluing condition,
/// level-wise decomposability of each triangle, and the boundary match.
pub fn phi_gamma_check(g: &Graph, m: u32, l_bound: u32) -> Result<PhiGammaReport> {
    check_modulus(m)?;
    if m != 3 {
        return Err(Error::Validation(format!(
            "the graded coverage check is only implemented for m = 3, got {m}"
        )));
    }
    if !g.is_trivalent() {
        return Err(Error::InvalidGraph("graded coverage needs a trivalent graph".into()));
    }
    let mut levels = Vec::new();
    let mut failures = Vec::new();
    for l in 0..=l_bound {
        let elements = enumerate_elements(g, 3, l)?;
        let mut covered = 0usize;
        for x in &elements {
            match glued_preimage(g, 3, x, l) {
                Ok(()) => covered += 1,
                Err(e) => failures.push(json!({
                    "level": l,
                    "element": x.to_json(),
                    "reason": e.to_string(),
                })),
            }
        }
        levels.push(PhiLevel { level: l, elements: elements.len(), covered });
    }
    Ok(PhiGammaReport { m: 3, l_bound, levels, failures })
}

/// The side of `edge` (at `slot`) at `vertex`, per the canonical side
/// assignment.
fn side_of_at(g: &Graph, vertex: &str, edge: &str, slot: usize) -> Result<Side> {
    vertex_sides(g, vertex)?
        .into_iter()
        .find(|(e, s, _)| e == edge && *s == slot)
        .map(|(_, _, side)| side)
        .ok_or_else(|| {
            Error::Inconsistent(format!("edge {edge:?} slot {slot} not at vertex {vertex:?}"))
        })
}

/// A degree-one tripod element with the given residues on e1, e2, e3.
fn vertex_element(m: u32, res: [u32; 3]) -> Result<PhyloElement> {
    let mut coords = BTreeMap::new();
    for (e, a) in ["e1", "e2", "e3"].into_iter().zip(res) {
        if a != 0 {
            let mut v = vec![0u32; (m - 1) as usize];
            v[(a - 1) as usize] = 1;
            coords.insert(e.to_string(), v);
        }
    }
    PhyloElement::new(m, 1, coords)
}

/// Builds and fully verifies a glued preimage of `x` at level `l`.
fn glued_preimage(g: &Graph, m: u32, x: &PhyloElement, l: u32) -> Result<()> {
    let mem = is_member(g, m, x)?;
    let witness = mem
        .witness
        .ok_or_else(|| Error::Inconsistent("enumerated element fails membership".into()))?;
    let mut triangles: BTreeMap<String, BzTriangle> = BTreeMap::new();
    for v in g.non_leaf_vertices() {
        let sides = vertex_sides(g, v)?;
        let mut total = BzTriangle::zero(m)?;
        for lab in &witness.labellings {
            let mut res = [0u32; 3];
            for (pos, (edge_id, slot, _)) in sides.iter().enumerate() {
                // The label as seen from this vertex. Edges split in the
                // witness tree keep the vertex at slot 0 of their halves.
                res[pos] = if witness.split.tree.edge(edge_id).is_some() {
                    lab.label_at(edge_id, *slot)
                } else {
                    lab.label_at(&format!("{edge_id}#{slot}"), 0)
                };
            }
            let lift = vertex_to_bz(m, &vertex_element(m, res)?)?;
            total = add_triangles(&total, &lift)?;
        }
        triangles.insert(v.clone(), total);
    }
    let glued = GluedBzElement { m, triangles };
    if !validate_glued(g, &glued)? {
        return Err(Error::Inconsistent("glued preimage fails the matching condition".into()));
    }
    for (v, t) in &glued.triangles {
        if decompose_graded_sl3(t, l)?.is_none() {
            return Err(Error::Inconsistent(format!(
                "triangle at {v:?} is not a sum of {l} generators"
            )));
        }
    }
    for e in g.edges() {
        let seen: Vec<u32> = if g.is_leaf_vertex(&e.ends[0]) {
            // Leaf at slot 0: read at the inner end and reverse.
            let side = side_of_at(g, &e.ends[1], &e.id, 1)?;
            glued.triangles[&e.ends[1]].pr_edge(side, true)?.coords().to_vec()
        } else {
            let side = side_of_at(g, &e.ends[0], &e.id, 0)?;
            glued.triangles[&e.ends[0]].pr_edge(side, false)?.coords().to_vec()
        };
        if seen != x.marginal(&e.id) {
            return Err(Error::Inconsistent(format!(
                "boundary weight on edge {:?} differs from the element",
                e.id
            )));
        }
    }
    Ok(())
}

/// Outcome of the degree-one admissibility check.
#[derive(Debug, Clone)]
pub struct DegreeOneAdmissibilityReport {
    pub m: u32,
    pub elements: usize,
    pub admissible: usize,
    pub failures: Vec<Value>,
}

impl DegreeOneAdmissibilityReport {
    pub fn all_admissible(&self) -> bool {
        self.admissible == self.elements && self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "elements": self.elements,
            "admissible": self.admissible,
            "failures": self.failures,
            "all_admissible": self.all_admissible(),
        })
    }
}

impl fmt::Display for DegreeOneAdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree-one admissibility: m = {}", self.m)?;
        writeln!(f, "  elements:   {}", self.elements)?;
        writeln!(f, "  admissible: {}", self.admissible)?;
        write!(f, "  all admissible: {}", self.all_admissible())
    }
}

/// Translates every degree-one element edge-by-edge to fundamental
/// weights and checks the level-one admissibility conditions: dual
/// weights at the two ends of each edge, and the zero-sum fusion rule
/// at every inner vertex.
pub fn theorem_main_degree1_check(g: &Graph, m: u32) -> Result<DegreeOneAdmissibilityReport> {
    check_modulus(m)?;
    if !g.is_connected() {
        return Err(Error::InvalidGraph("admissibility check needs a connected graph".into()));
    }
    let labellings = degree_one_elements(g, m)?;
    let mut admissible = 0usize;
    let mut failures = Vec::new();
    for lab in &labellings {
        match check_admissible(g, m, lab) {
            Ok(()) => admissible += 1,
            Err(e) => failures.push(json!({
                "labelling": lab.to_json(),
                "reason": e.to_string(),
            })),
        }
    }
    Ok(DegreeOneAdmissibilityReport { m, elements: labellings.len(), admissible, failures })
}

/// Zero maps to the zero weight, a nonzero residue to its fundamental
/// weight.
fn weight_of_residue(m: u32, a: u32) -> Result<DominantWeight> {
    if a == 0 {
        DominantWeight::zero(m)
    } else {
        DominantWeight::fundamental(m, a)
    }
}

fn check_admissible(g: &Graph, m: u32, lab: &EdgeLabelling) -> Result<()> {
    for e in g.edges() {
        let w0 = weight_of_residue(m, lab.label_at(&e.id, 0))?;
        let w1 = weight_of_residue(m, lab.label_at(&e.id, 1))?;
        if w0.dual() != w1 {
            return Err(Error::Inconsistent(format!(
                "edge {:?} ends do not carry dual weights",
                e.id
            )));
        }
    }
    for v in g.non_leaf_vertices() {
        let indices: Vec<u32> = g
            .incident_half_edges(v)
            .iter()
            .map(|&(ei, slot)| lab.label_at(&g.edges()[ei].id, slot))
            .collect();
        let fused = if indices.len() == 3 {
            fundamental_triple_invariant(indices[0], indices[1], indices[2], m)? == 1
        } else {
            indices.iter().map(|&a| u64::from(a)).sum::<u64>() % u64::from(m) == 0
        };
        if !fused {
            return Err(Error::Validation(format!("vertex {v:?} fails the fusion condition")));
        }
    }
    Ok(())
}

/// Hilbert values of every trivalent graph of one type, side by side.
#[derive(Debug, Clone)]
pub struct HilbertIndependenceReport {
    pub m: u32,
    pub genus: usize,
    pub leaves: usize,
    pub d_max: u32,
    pub graphs: Vec<Value>,
    /// `table[i][d]` is the Hilbert value of graph `i` at degree `d`.
    pub table: Vec<Vec<u64>>,
    pub all_agree: bool,
    pub disagreement: Option<Value>,
}

impl HilbertIndependenceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "genus": self.genus,
            "leaves": self.leaves,
            "d_max": self.d_max,
            "graphs": self.graphs,
            "table": self.table,
            "all_agree": self.all_agree,
            "disagreement": self.disagreement,
        })
    }
}

impl fmt::Display for HilbertIndependenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "hilbert columns: m = {}, type ({}, {}), degrees 0..={}",
            self.m, self.genus, self.leaves, self.d_max
        )?;
        write!(f, "  degree:")?;
        for d in 0..=self.d_max {
            write!(f, " {d:>8}")?;
        }
        writeln!(f)?;
        for (i, row) in self.table.iter().enumerate() {
            write!(f, "  graph{i}:")?;
            for v in row {
                write!(f, " {v:>8}")?;
            }
            writeln!(f)?;
        }
        write!(f, "  all columns agree: {}", self.all_agree)
    }
}

/// Tabulates the Hilbert values of all trivalent graphs of type
/// `(genus, leaves)` for degrees up to `d_max` and flags whether the
/// columns agree. A found disagreement is re-verified against direct
/// element enumeration before being reported.
pub fn hilbert_independence_experiment(
    m: u32,
    genus: usize,
    leaves: usize,
    d_max: u32,
) -> Result<HilbertIndependenceReport> {
    check_modulus(m)?;
    let graphs = enumerate_trivalent_graphs(genus, leaves, usize::MAX)?;
    if graphs.is_empty() {
        return Err(Error::DegenerateType { g: genus, n: leaves });
    }
    let mut table = Vec::with_capacity(graphs.len());
    for g in &graphs {
        let mut row = Vec::with_capacity(d_max as usize + 1);
        for d in 0..=d_max {
            row.push(hilbert_value(g, m, d)?);
        }
        table.push(row);
    }
    let mut disagreement = None;
    'scan: for d in 0..=(d_max as usize) {
        for i in 0..table.len() {
            for j in (i + 1)..table.len() {
                if table[i][d] != table[j][d] {
                    // Independent recount before trusting the witness.
                    let ci = enumerate_elements(&graphs[i], m, d as u32)?.len() as u64;
                    let cj = enumerate_elements(&graphs[j], m, d as u32)?.len() as u64;
                    if ci != table[i][d] || cj != table[j][d] {
                        return Err(Error::Inconsistent(
                            "hilbert counting disagrees with direct enumeration".into(),
                        ));
                    }
                    disagreement = Some(json!({
                        "degree": d,
                        "graph_a": i,
                        "graph_b": j,
                        "value_a": table[i][d],
                        "value_b": table[j][d],
                    }));
                    break 'scan;
                }
            }
        }
    }
    Ok(HilbertIndependenceReport {
        m,
        genus,
        leaves,
        d_max,
        graphs: graphs.iter().map(Graph::to_json).collect(),
        table,
        all_agree: disagreement.is_none(),
        disagreement,
    })
}

/// A multiset of degree-one generators, from either semigroup.
#[derive(Debug, Clone)]
pub enum GeneratorMultiset {
    Labelling(Vec<PhyloElement>),
    Triangle(Vec<BzTriangle>),
}

/// True exactly when the two multisets have equal element-wise sums, an
/// exponent-vector identity between products of generators. The two
/// sides must come from the same semigroup.
pub fn verify_relation(m: u32, lhs: &GeneratorMultiset, rhs: &GeneratorMultiset) -> Result<bool> {
    check_modulus(m)?;
    match (lhs, rhs) {
        (GeneratorMultiset::Labelling(a), GeneratorMultiset::Labelling(b)) => {
            Ok(sum_elements(m, a)? == sum_elements(m, b)?)
        }
        (GeneratorMultiset::Triangle(a), GeneratorMultiset::Triangle(b)) => {
            Ok(sum_triangles(m, a)? == sum_triangles(m, b)?)
        }
        _ => Err(Error::Validation("the two multisets live in different semigroups".into())),
    }
}

fn sum_elements(m: u32, xs: &[PhyloElement]) -> Result<PhyloElement> {
    let mut acc = PhyloElement::zero(m, 0);
    for x in xs {
        acc = acc.add(x)?;
    }
    Ok(acc)
}

fn sum_triangles(m: u32, ts: &[BzTriangle]) -> Result<BzTriangle> {
    let mut acc = BzTriangle::zero(m)?;
    for t in ts {
        acc = add_triangles(&acc, t)?;
    }
    Ok(acc)
}

/// Counts the binomial relations of degree at most 3 among the eight
/// nonzero SL3 triangle generators: unordered pairs of generator
/// multisets of size 1..=3 with no common generator and equal sums.
/// Exactly one exists, pairing the two triple-type generators against
/// the three pair-type generators on one residue orbit.
pub fn bz_cubic_relation_count() -> Result<usize> {
    let gens = sl3_graded_generators()?;
    let mut multisets: Vec<(Vec<usize>, BzTriangle)> = Vec::new();
    for a in 0..gens.len() {
        let sa = gens[a].clone();
        for b in a..gens.len() {
            let sb = add_triangles(&sa, &gens[b])?;
            for c in b..gens.len() {
                let sc = add_triangles(&sb, &gens[c])?;
                multisets.push((vec![a, b, c], sc));
            }
            multisets.push((vec![a, b], sb));
        }
        multisets.push((vec![a], sa));
    }
    let mut count = 0usize;
    for i in 0..multisets.len() {
        for j in (i + 1)..multisets.len() {
            let (u, su) = &multisets[i];
            let (v, sv) = &multisets[j];
            if su == sv && u.iter().all(|x| !v.contains(x)) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::EdgeLabelling;

    fn vertex(m: u32, a: u32, b: u32, c: u32) -> PhyloElement {
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
    fn zero_vertex_lifts_to_zero_triangle() {
        for m in 2u32..=5 {
            let z = PhyloElement::zero(m, 1);
            assert_eq!(vertex_to_bz(m, &z).unwrap(), BzTriangle::zero(m).unwrap());
        }
    }

    #[test]
    fn all_ones_vertex_m3_is_the_inner_triple() {
        let t = vertex_to_bz(3, &vertex(3, 1, 1, 1)).unwrap();
        let grid = build_grid(3).unwrap();
        for p in [(2, 1, 0), (0, 2, 1), (1, 0, 2)] {
            assert_eq!(t.value_at(&grid, &p).unwrap(), 1, "point {p:?}");
        }
        assert_eq!(t.values().iter().sum::<u64>(), 3);
        // The fiber over (ω1; ω1; ω1) is a single triangle: this one.
        let f1 = DominantWeight::fundamental(3, 1).unwrap();
        let fiber = enumerate_fiber(3, &f1, &f1, &f1).unwrap();
        assert_eq!(fiber, vec![t]);
    }

    #[test]
    fn pair_vertex_m4_with_zero_middle_edge() {
        let t = vertex_to_bz(4, &vertex(4, 1, 0, 3)).unwrap();
        let grid = build_grid(4).unwrap();
        assert_eq!(t.value_at(&grid, &(5, 0, 0)).unwrap(), 1);
        assert_eq!(t.values().iter().sum::<u64>(), 1);
        let (lam, mu, nu) = t.pr().unwrap();
        assert_eq!(lam.coords(), &[1, 0, 0]);
        assert_eq!(mu.coords(), &[0, 0, 0]);
        assert_eq!(nu.coords(), &[0, 0, 1]);
    }

    #[test]
    fn every_vertex_lift_projects_correctly() {
        for m in 2u32..=6 {
            for v in tripod_vertices(m).unwrap() {
                let t = vertex_to_bz(m, &v).unwrap();
                let (lam, mu, nu) = tripod_weight_triple(&v).unwrap();
                assert_eq!(t.pr().unwrap(), (lam, mu, nu), "m = {m}");
            }
        }
    }

    #[test]
    fn non_vertices_are_rejected() {
        // Degree two.
        let two = vertex(3, 1, 1, 1).add(&vertex(3, 1, 1, 1)).unwrap();
        assert!(vertex_to_bz(3, &two).is_err());
        // Residues not summing to zero.
        let bad = EdgeLabelling::new(3, [("e1".to_string(), 1)].into_iter().collect())
            .unwrap()
            .to_element();
        assert!(vertex_to_bz(3, &bad).is_err());
        // Wrong modulus.
        assert!(vertex_to_bz(2, &vertex(3, 1, 1, 1)).is_err());
    }

    #[test]
    fn inclusion_and_equality_hold_for_m2() {
        let r = check_inclusion(2, 3).unwrap();
        assert_eq!(r.forward_violations, Vec::<Value>::new());
        assert_eq!(r.equality_violations, Vec::<Value>::new());
        assert!(r.equality_certified());
    }

    #[test]
    fn inclusion_and_equality_hold_for_m3_small() {
        let r = check_inclusion(3, 2).unwrap();
        assert!(r.inclusion_certified());
        assert!(r.equality_certified());
    }

    #[test]
    fn equality_fails_for_m4() {
        let r = check_inclusion(4, 2).unwrap();
        assert!(r.inclusion_certified());
        assert!(!r.equality_certified());
        let expected = json!({
            "lambda": DominantWeight::new(4, vec![1, 0, 1]).unwrap().to_json(),
            "mu": DominantWeight::fundamental(4, 2).unwrap().to_json(),
            "nu": DominantWeight::fundamental(4, 2).unwrap().to_json(),
        });
        assert!(
            r.equality_violations.contains(&expected),
            "violations: {:?}",
            r.equality_violations
        );
    }

    #[test]
    fn counterexample_m4_exact_points() {
        let t = counterexample_m_ge_4(4).unwrap();
        let grid = build_grid(4).unwrap();
        let pts = [(4, 1, 0), (1, 4, 0), (3, 0, 2), (0, 3, 2), (2, 2, 1)];
        for p in pts {
            assert_eq!(t.value_at(&grid, &p).unwrap(), 1, "point {p:?}");
        }
        assert_eq!(t.values().iter().sum::<u64>(), pts.len() as u64);
        let (lam, mu, nu) = t.pr().unwrap();
        assert_eq!(lam.coords(), &[1, 0, 1]);
        assert_eq!(mu.coords(), &[0, 1, 0]);
        assert_eq!(nu.coords(), &[0, 1, 0]);
    }

    #[test]
    fn counterexample_m5_self_checks() {
        let t = counterexample_m_ge_4(5).unwrap();
        assert_eq!(t.values().iter().sum::<u64>(), 6);
        let (lam, mu, nu) = t.pr().unwrap();
        assert_eq!(lam.coords(), &[1, 0, 0, 1]);
        assert_eq!(mu.coords(), &[0, 1, 0, 0]);
        assert_eq!(nu.coords(), &[0, 0, 1, 0]);
    }

    #[test]
    fn counterexample_needs_m_at_least_4() {
        assert!(counterexample_m_ge_4(3).is_err());
        assert!(counterexample_m_ge_4(2).is_err());
    }

    #[test]
    fn graded_coverage_tripod() {
        let r = phi_gamma_check(&Graph::tripod(), 3, 2).unwrap();
        assert!(r.fully_covered(), "failures: {:?}", r.failures);
        assert_eq!(r.levels[0].elements, 1);
        assert_eq!(r.levels[1].elements, 9);
        assert_eq!(r.levels[1].covered, 9);
        assert_eq!(r.levels[2].covered, r.levels[2].elements);
    }

    #[test]
    fn graded_coverage_four_leaf_tree() {
        let g = crate::graphs::make_gamma_gn(0, 4).unwrap();
        let r = phi_gamma_check(&g, 3, 1).unwrap();
        assert!(r.fully_covered(), "failures: {:?}", r.failures);
        assert_eq!(r.levels[1].elements, 27);
        assert_eq!(r.levels[1].covered, 27);
    }

    #[test]
    fn graded_coverage_rejects_other_moduli() {
        assert!(phi_gamma_check(&Graph::tripod(), 2, 1).is_err());
    }

    #[test]
    fn degree_one_admissibility_examples() {
        let r = theorem_main_degree1_check(&Graph::tripod(), 3).unwrap();
        assert_eq!((r.elements, r.admissible), (9, 9));
        assert!(r.all_admissible());
        let g = crate::graphs::make_gamma_gn(1, 2).unwrap();
        let r = theorem_main_degree1_check(&g, 2).unwrap();
        assert_eq!((r.elements, r.admissible), (4, 4));
        assert!(r.all_admissible());
    }

    #[test]
    fn hilbert_columns_agree_for_m2_trees() {
        let r = hilbert_independence_experiment(2, 0, 6, 3).unwrap();
        assert_eq!(r.table.len(), 2, "two shapes of six-leaf trivalent trees");
        assert!(r.all_agree);
        assert_eq!(r.table[0], r.table[1]);
    }

    #[test]
    fn hilbert_columns_agree_for_m2_genus_one() {
        let r = hilbert_independence_experiment(2, 1, 3, 3).unwrap();
        assert!(r.table.len() >= 2);
        assert!(r.all_agree, "table: {:?}", r.table);
    }

    #[test]
    fn cubic_identities_on_the_tripod() {
        let m = 3;
        let lhs = GeneratorMultiset::Labelling(vec![
            vertex(m, 1, 1, 1),
            vertex(m, 2, 2, 2),
            PhyloElement::zero(m, 1),
        ]);
        let orbit1 = GeneratorMultiset::Labelling(vec![
            vertex(m, 1, 2, 0),
            vertex(m, 0, 1, 2),
            vertex(m, 2, 0, 1),
        ]);
        let orbit2 = GeneratorMultiset::Labelling(vec![
            vertex(m, 2, 1, 0),
            vertex(m, 0, 2, 1),
            vertex(m, 1, 0, 2),
        ]);
        assert!(verify_relation(m, &lhs, &orbit1).unwrap());
        assert!(verify_relation(m, &lhs, &orbit2).unwrap());
        // A non-identity.
        let other = GeneratorMultiset::Labelling(vec![
            vertex(m, 1, 1, 1),
            vertex(m, 1, 1, 1),
            vertex(m, 1, 1, 1),
        ]);
        assert!(!verify_relation(m, &lhs, &other).unwrap());
        // Mixed semigroups are rejected.
        let t = GeneratorMultiset::Triangle(vec![BzTriangle::zero(3).unwrap()]);
        assert!(verify_relation(m, &lhs, &t).is_err());
    }

    #[test]
    fn the_lifted_cubic_identity() {
        // The two triple-type lifts against one pair-type orbit.
        let m = 3;
        let lhs = GeneratorMultiset::Triangle(vec![
            vertex_to_bz(m, &vertex(m, 1, 1, 1)).unwrap(),
            vertex_to_bz(m, &vertex(m, 2, 2, 2)).unwrap(),
        ]);
        let rhs = GeneratorMultiset::Triangle(vec![
            vertex_to_bz(m, &vertex(m, 1, 2, 0)).unwrap(),
            vertex_to_bz(m, &vertex(m, 0, 1, 2)).unwrap(),
            vertex_to_bz(m, &vertex(m, 2, 0, 1)).unwrap(),
        ]);
        assert!(verify_relation(m, &lhs, &rhs).unwrap());
        // The other orbit does not lift to an identity.
        let rhs2 = GeneratorMultiset::Triangle(vec![
            vertex_to_bz(m, &vertex(m, 2, 1, 0)).unwrap(),
            vertex_to_bz(m, &vertex(m, 0, 2, 1)).unwrap(),
            vertex_to_bz(m, &vertex(m, 1, 0, 2)).unwrap(),
        ]);
        assert!(!verify_relation(m, &lhs, &rhs2).unwrap());
    }

    #[test]
    fn exactly_one_cubic_triangle_relation() {
        assert_eq!(bz_cubic_relation_count().unwrap(), 1);
    }
}
