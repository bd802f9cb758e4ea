//! Gluing BZ triangles along a trivalent graph.
//!
//! Each non-leaf vertex carries a triangle; each edge between carried
//! vertices imposes the dual-matching condition: the projection read at
//! one endpoint equals the coordinate-reversed projection read at the
//! other. Side assignment at a vertex is canonical: incident half-edges
//! sorted by (edge id, slot) take the sides NW, NE, S in that order.

use super::{enumerate_fiber, BzTriangle, Side};
use crate::graphs::Graph;
use crate::weights::DominantWeight;
use crate::{check_modulus, Error, Result};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// A family of triangles indexed by the non-leaf vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GluedBzElement {
    pub m: u32,
    pub triangles: BTreeMap<String, BzTriangle>,
}

impl GluedBzElement {
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        for (v, t) in &self.triangles {
            obj.insert(v.clone(), t.to_json());
        }
        json!({ "m": self.m, "triangles": obj })
    }

    pub fn from_json(v: &Value) -> Result<GluedBzElement> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("glued element must be an object".into()))?;
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("glued element needs a numeric \"m\"".into()))? as u32;
        check_modulus(m)?;
        let triangles = obj
            .get("triangles")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Json("glued element needs a \"triangles\" object".into()))?;
        let mut out = BTreeMap::new();
        for (vertex, tv) in triangles {
            let t = BzTriangle::from_json(tv)?;
            if t.m != m {
                return Err(Error::ModulusMismatch(m, t.m));
            }
            out.insert(vertex.clone(), t);
        }
        Ok(GluedBzElement { m, triangles: out })
    }
}

/// The side each incident half-edge occupies at a trivalent vertex:
/// half-edges sorted by (edge id, slot) map to NW, NE, S.
pub fn vertex_sides(g: &Graph, vertex: &str) -> Result<Vec<(String, usize, Side)>> {
    let half = g.incident_half_edges(vertex);
    if half.len() != 3 {
        return Err(Error::Validation(format!(
            "vertex {vertex:?} has degree {}, need 3",
            half.len()
        )));
    }
    let sides = [Side::NW, Side::NE, Side::S];
    Ok(half
        .iter()
        .zip(sides)
        .map(|(&(edge_idx, slot), side)| (g.edges()[edge_idx].id.clone(), slot, side))
        .collect())
}

/// The side of `edge` (at the given slot) at its endpoint vertex.
fn side_of(g: &Graph, vertex: &str, edge_id: &str, slot: usize) -> Result<Side> {
    vertex_sides(g, vertex)?
        .into_iter()
        .find(|(e, s, _)| e == edge_id && *s == slot)
        .map(|(_, _, side)| side)
        .ok_or_else(|| {
            Error::Inconsistent(format!("edge {edge_id:?} slot {slot} not found at {vertex:?}"))
        })
}

/// Checks the dual-matching condition on every edge joining two carried
/// vertices: the projection at one end equals the reversed projection at
/// the other. Missing or superfluous triangles are errors, a failed match
/// is `false`.
pub fn validate_glued(g: &Graph, x: &GluedBzElement) -> Result<bool> {
    check_modulus(x.m)?;
    if !g.is_trivalent() {
        return Err(Error::InvalidGraph("gluing needs a trivalent graph".into()));
    }
    for v in g.non_leaf_vertices() {
        if !x.triangles.contains_key(v.as_str()) {
            return Err(Error::Validation(format!("vertex {v:?} has no triangle")));
        }
    }
    for v in x.triangles.keys() {
        if g.is_leaf_vertex(v) || !g.vertices().contains(v) {
            return Err(Error::Validation(format!("{v:?} is not a non-leaf vertex")));
        }
    }
    for t in x.triangles.values() {
        if t.m != x.m {
            return Err(Error::ModulusMismatch(x.m, t.m));
        }
    }
    for e in g.edges() {
        let carried0 = x.triangles.contains_key(&e.ends[0]);
        let carried1 = x.triangles.contains_key(&e.ends[1]);
        if !(carried0 && carried1) {
            continue;
        }
        let s0 = side_of(g, &e.ends[0], &e.id, 0)?;
        let s1 = side_of(g, &e.ends[1], &e.id, 1)?;
        let w0 = x.triangles[&e.ends[0]].pr_edge(s0, false)?;
        let w1 = x.triangles[&e.ends[1]].pr_edge(s1, true)?;
        if w0 != w1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All glued elements with prescribed leaf projections and internal-edge
/// weight coordinates bounded by `bound`: internal edges get a weight
/// (read from the slot-0 end; the slot-1 end sees its dual), then each
/// vertex contributes its fiber independently.
pub fn enumerate_glued(
    g: &Graph,
    m: u32,
    leaf_weights: &BTreeMap<String, DominantWeight>,
    bound: u32,
) -> Result<Vec<GluedBzElement>> {
    check_modulus(m)?;
    if !g.is_trivalent() {
        return Err(Error::InvalidGraph("gluing needs a trivalent graph".into()));
    }
    if !g.is_connected() {
        return Err(Error::InvalidGraph("gluing needs a connected graph".into()));
    }
    for e in g.leaf_edges() {
        if !leaf_weights.contains_key(e) {
            return Err(Error::Validation(format!("leaf edge {e:?} has no weight assigned")));
        }
    }
    for (e, w) in leaf_weights {
        if !g.leaf_edges().contains(e) {
            return Err(Error::Validation(format!("edge {e:?} is not a leaf edge")));
        }
        if w.m != m {
            return Err(Error::ModulusMismatch(m, w.m));
        }
    }
    let internal: Vec<String> = g
        .edges()
        .iter()
        .filter(|e| !g.leaf_edges().contains(&e.id))
        .map(|e| e.id.clone())
        .collect();
    let choices = super::fiber::weights_up_to(m, bound)?;
    let vertices: Vec<String> = g.non_leaf_vertices().into_iter().cloned().collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; internal.len()];
    'outer: loop {
        let assignment: BTreeMap<&str, &DominantWeight> = internal
            .iter()
            .map(|e| e.as_str())
            .zip(pick.iter().map(|&i| &choices[i]))
            .collect();
        // Per-vertex fiber under the induced side weights.
        let mut fibers: Vec<Vec<BzTriangle>> = Vec::with_capacity(vertices.len());
        let mut feasible = true;
        for v in &vertices {
            let mut side_weights: Vec<DominantWeight> = Vec::with_capacity(3);
            for (edge_id, slot, _) in vertex_sides(g, v)? {
                let w = if let Some(w) = assignment.get(edge_id.as_str()) {
                    // Slot-0 end reads the weight, slot-1 end its dual.
                    if slot == 0 {
                        (*w).clone()
                    } else {
                        w.dual()
                    }
                } else {
                    leaf_weights[&edge_id].clone()
                };
                side_weights.push(w);
            }
            let fiber = enumerate_fiber(m, &side_weights[0], &side_weights[1], &side_weights[2])?;
            if fiber.is_empty() {
                feasible = false;
                break;
            }
            fibers.push(fiber);
        }
        if feasible {
            let mut idx = vec![0usize; vertices.len()];
            loop {
                let triangles: BTreeMap<String, BzTriangle> = vertices
                    .iter()
                    .zip(&idx)
                    .map(|(v, &i)| (v.clone(), fibers[vertices.iter().position(|x| x == v).unwrap()][i].clone()))
                    .collect();
                let elem = GluedBzElement { m, triangles };
                debug_assert!(validate_glued(g, &elem)?);
                out.push(elem);
                let mut k = 0;
                loop {
                    if k == vertices.len() {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < fibers[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == internal.len() {
                break 'outer;
            }
            pick[k] += 1;
            if pick[k] < choices.len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if internal.is_empty() {
            break;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}
